#pragma once

#include <map>
#include <optional>
#include <string>

#include "cepkit/config_io.hpp"
#include "cepkit/report.hpp"
#include "cepkit/serialize.hpp"

namespace cepkit::pipeline {

/// Apply an estimate spec's derivations to a freshly ingested panel.
PanelDataset apply_derivations(const PanelDataset& ds, const EstimateSpec& spec);

struct EstimateOutput {
    FitResult fit;
    std::map<std::string, TestReport> wald;
    std::optional<VifResult> vif;
    std::optional<TestReport> hausman_report;
    Table table;
};

/// Fit the spec, run the Table 1/2 diagnostics around it (per-regressor
/// Wald, VIF, pooled FE-vs-RE Hausman) and lay out the table.
EstimateOutput run_estimate(const PanelDataset& raw, const EstimateSpec& spec);

struct ModelsOutput {
    std::map<std::string, std::map<std::string, ModelSelection>> selection;  // var -> country
    std::map<std::string, std::map<std::string, ForecastModel>> models;      // var -> country -> chosen
    std::optional<PooledGrowthModel> growth_model;
    std::optional<GrowthTable> growth_table;
    Table aic_table;
    std::optional<Table> t4;
    nlohmann::json to_json() const;
};

/// Fit trend/AR(2) (and Tobit for RES) per country and variable, pick by
/// AIC, compute the growth-rate table, and fit the pooled growth model
/// when GHG, CONSM and RES are all present.
ModelsOutput run_models(const PanelDataset& yearly);

struct ForecastOutput {
    std::optional<Table> t3, t6, t7;
    std::map<std::string, std::map<int, EnsembleByCountry>> ensembles;  // var -> year
    nlohmann::json quantile_json;
};

ForecastOutput run_forecast(const ModelsOutput& models, const TargetConfig& cfg, int n_paths,
                            std::uint64_t master_seed, int n_workers = 1);

struct ScenarioOutput {
    Table t5;
    nlohmann::json quantile_json;
    std::vector<ScenarioPanel> panels;
};

ScenarioOutput run_scenarios(const PooledGrowthModel& growth, const std::vector<Scenario>& scenarios,
                             const TargetConfig& cfg, int n_paths, std::uint64_t master_seed,
                             int n_workers = 1);

/// Full pipeline into an artifact directory (with manifest); returns the
/// manifest JSON.
nlohmann::json run_report(const RunConfig& cfg, const std::string& out_dir);

}  // namespace cepkit::pipeline
