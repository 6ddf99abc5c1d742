#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "cepkit/derive.hpp"
#include "cepkit/model_spec.hpp"

namespace cepkit {

nlohmann::json load_json_file(const std::string& path);

struct DerivationSpec {
    std::string name;
    std::string unit;
    Derivation rule;
};

DerivationSpec parse_derivation(const nlohmann::json& j, Frequency freq);

/// Estimation job: derivations to apply, the model, which estimator runs
/// it, and how the emitted table labels itself.
struct EstimateSpec {
    std::vector<DerivationSpec> derive;
    ModelSpec model;
    std::string estimator = "panel";  // panel | ols | random_effects
    FitOptions options;
    std::string layout = "T1";
    bool hausman = true;  // fit pooled FE/RE companions for the Hausman row
};

EstimateSpec parse_estimate_spec(const nlohmann::json& j, Frequency freq);
EstimateSpec load_estimate_spec(const std::string& path, Frequency freq);

ModelSpec parse_model_spec(const nlohmann::json& j);

/// Full-pipeline configuration for the `report` command.
struct RunConfig {
    struct Stage {
        std::string input;
        std::string schema;
        std::string spec;
    };
    std::optional<Stage> monthly;
    std::optional<Stage> biannual;
    std::optional<Stage> yearly;  // spec unused
    std::string targets;          // empty = builtin table
    std::vector<std::string> scenarios{"A", "B", "C"};
    int n_paths = 100000;
    std::uint64_t master_seed = 0;
    bool seed_set = false;
    std::string format = "both";  // table | csv | both
    int n_workers = 1;
};

RunConfig parse_run_config(const nlohmann::json& j);

}  // namespace cepkit
