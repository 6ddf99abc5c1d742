#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cepkit/diagnostics.hpp"
#include "cepkit/fit_result.hpp"
#include "cepkit/montecarlo.hpp"
#include "cepkit/targets.hpp"

namespace cepkit {

/// Display cell. The text rendering rounds per kind (prices 3 decimals,
/// shares whole percent, levels integers); the CSV twin always carries
/// full precision.
struct Cell {
    enum class Kind { Empty, Text, Price, Share, Level, Rate, PValue, Raw };
    Kind kind = Kind::Empty;
    double value = 0.0;
    std::string text;
    bool marked = false;

    static Cell empty() { return {}; }
    static Cell of_text(std::string t) { return {Kind::Text, 0.0, std::move(t), false}; }
    static Cell price(double v) { return {Kind::Price, v, {}, false}; }
    static Cell share(double v) { return {Kind::Share, v, {}, false}; }
    static Cell level(double v) { return {Kind::Level, v, {}, false}; }
    static Cell rate(double v) { return {Kind::Rate, v, {}, false}; }
    static Cell pvalue(double v) { return {Kind::PValue, v, {}, false}; }
    static Cell raw(double v) { return {Kind::Raw, v, {}, false}; }

    std::string render() const;  // without mark
};

struct Table {
    std::string name;   // "T1".."T7", "AIC", ...
    std::string title;
    std::vector<std::string> columns;
    struct Row {
        std::string label;
        std::vector<Cell> cells;
    };
    std::vector<Row> rows;

    std::string to_text(char mark = '*') const;
    std::string to_csv() const;  // long format: table,row,col,value,marked
};

/// Parse a CSV twin back into (row, col) -> value for round-trip checks.
std::map<std::pair<std::string, std::string>, double> parse_table_csv(const std::string& csv);

using EnsembleByCountry = std::map<std::string, TrajectoryEnsemble>;

struct RegressionTableInputs {
    const FitResult* fit = nullptr;
    std::map<std::string, TestReport> wald;  // per per-country regressor
    std::optional<VifResult> vif;
    std::optional<TestReport> hausman;
};

/// Wholesale-price / government-wedge regression table (Table 1/2 shape):
/// per-country coefficient rows with a Wald-p column, AR rows, fit
/// statistics, VIF and Hausman rows.
Table build_regression_table(const std::string& name, const RegressionTableInputs& in,
                             Cell::Kind coef_kind = Cell::Kind::Price);

/// GHG trend-forecast table (Table 3 shape). Cells of a horizon are
/// marked when Q(1%) exceeds the AtMost target.
Table build_t3(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030);

/// Average growth-rate table (Table 4 shape) with an all-countries column.
Table build_t4(const GrowthTable& growth);

struct ScenarioPanel {
    std::string name;  // "A", "B", "C"
    EnsembleByCountry e2020;
    EnsembleByCountry e2030;
};

/// Scenario table (Table 5 shape): header level rows then Q(1%)/Q(50%)
/// rows per panel and horizon.
Table build_t5(const TargetConfig& cfg, const std::map<std::string, std::pair<double, int>>& start_levels,
               const std::vector<ScenarioPanel>& panels);

/// RES share table (Table 6 shape); marked when Q(99%) falls short of the
/// AtLeast target.
Table build_t6(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030);

/// Consumption projection table (Table 7 shape).
Table build_t7(const TargetConfig& cfg, const EnsembleByCountry& e2020,
               const EnsembleByCountry& e2030);

/// AIC comparison table for fitted per-country model candidates.
Table build_aic_table(const std::map<std::string, std::map<std::string, ModelSelection>>& by_var_country);

/// Atomic artifact writing plus a manifest recording config, seed and
/// input/output digests. Artifacts land in out_dir; each file is written
/// to a temporary name and renamed into place.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path out_dir);
    void add(const std::string& name, std::string content);
    bool has(const std::string& name) const;

    /// Write everything plus manifest.json; returns the manifest.
    nlohmann::json commit(const std::string& command, const nlohmann::json& config,
                          std::uint64_t master_seed,
                          const std::map<std::string, std::string>& inputs);

private:
    std::filesystem::path out_dir_;
    std::vector<std::pair<std::string, std::string>> artifacts_;
};

void atomic_write_file(const std::filesystem::path& path, const std::string& content);
std::string digest_file(const std::filesystem::path& path);

}  // namespace cepkit
