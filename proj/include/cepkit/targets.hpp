#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cepkit/panel.hpp"

namespace cepkit {

enum class Horizon { Y2020 = 2020, Y2030 = 2030 };
enum class Direction { AtMost, AtLeast };

/// GHG target: 1990 base cut by 20% (2020) or 40% (2030).
double ghg_target(double base_1990, Horizon horizon);

struct ConsumptionTargets {
    double projection;
    double target;
};

/// Consumption projection from 2010 gross inland consumption (+1.5%/year
/// to 2020, +0.8%/year to 2030) and the target cut of 20% / 27% off the
/// projection.
ConsumptionTargets consumption_projection_and_target(double gic_2010, Horizon horizon);

/// Per-country reference data: 1990 GHG bases, national 2020 RES targets,
/// 2010 gross inland consumption. Ships as a versioned config file.
struct TargetConfig {
    struct Entry {
        double ghg_1990 = 0.0;
        double res_2020 = 0.0;
        double gic_2010 = 0.0;
    };
    int version = 0;
    std::map<std::string, Entry> countries;

    static TargetConfig builtin();
    static TargetConfig load(const std::string& path);
    static TargetConfig parse(const std::string& json_text);
    std::string serialize() const;

    const Entry& at(const std::string& country) const;
};

/// National RES share target; the 2030 value is the national 2020 target
/// floored at the EU-wide 27%.
double res_target(const TargetConfig& cfg, const std::string& country, Horizon horizon);

/// One resolved target with its derivation inputs kept for audit.
struct TargetSet {
    std::string country;
    std::string variable;
    Horizon horizon = Horizon::Y2020;
    double target_value = 0.0;
    std::string unit;
    Direction direction = Direction::AtMost;
    std::string derivation;  // GhgCut | ResShare | ConsumptionCut
    std::map<std::string, double> inputs;
};

TargetSet make_ghg_target(const TargetConfig& cfg, const std::string& country, Horizon horizon);
TargetSet make_res_target(const TargetConfig& cfg, const std::string& country, Horizon horizon);
TargetSet make_consumption_target(const TargetConfig& cfg, const std::string& country,
                                  Horizon horizon);
/// Recompute a target from its recorded inputs; must reproduce target_value.
double rederive_target(const TargetSet& t);

/// Average yearly growth rates per country and variable, plus an
/// all-countries aggregate built from summed levels.
struct GrowthTable {
    std::vector<std::string> variables;
    std::map<std::string, std::map<std::string, double>> rates;  // country -> var -> rate
    std::map<std::string, double> total;                         // var -> rate
};

GrowthTable average_growth_rates(const PanelDataset& ds, const std::vector<std::string>& variables,
                                 bool geometric = false);

/// Named scenario: annual growth rate per variable, either global or per
/// country. Rates must exceed -1.
struct Scenario {
    std::string name;
    // variable -> (country -> rate); "" keys a global rate
    std::map<std::string, std::map<std::string, double>> growth;

    double rate(const std::string& variable, const std::string& country) const;
    void validate() const;
};

/// Scenario panels: A follows observed average growth (needs a fitted
/// growth table), B sets consumption -2%/RES +2%, C sets consumption
/// -2%/RES +6%.
Scenario builtin_scenario(const std::string& name, const GrowthTable* table = nullptr);
std::vector<Scenario> builtin_scenarios(const GrowthTable& table);

}  // namespace cepkit
