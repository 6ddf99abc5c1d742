#include "cepkit/targets.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cepkit/errors.hpp"
#include "cepkit_builtin_targets.hpp"

namespace cepkit {

double ghg_target(double base_1990, Horizon horizon) {
    if (base_1990 <= 0.0) throw Error::input("InvalidArgument", "1990 GHG base must be positive");
    return base_1990 * (horizon == Horizon::Y2020 ? 0.8 : 0.6);
}

ConsumptionTargets consumption_projection_and_target(double gic_2010, Horizon horizon) {
    if (gic_2010 <= 0.0)
        throw Error::input("InvalidArgument", "2010 gross inland consumption must be positive");
    double proj_2020 = gic_2010 * std::pow(1.015, 10);
    if (horizon == Horizon::Y2020) return {proj_2020, proj_2020 * 0.8};
    double proj_2030 = proj_2020 * std::pow(1.008, 10);
    return {proj_2030, proj_2030 * 0.73};
}

const TargetConfig::Entry& TargetConfig::at(const std::string& country) const {
    auto it = countries.find(country);
    if (it == countries.end())
        throw Error::input("UnknownCountry", "no target data for country '" + country + "'");
    return it->second;
}

TargetConfig TargetConfig::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("target config is not valid JSON: ") + e.what());
    }
    TargetConfig cfg;
    try {
        cfg.version = j.at("version").get<int>();
        for (const auto& [code, entry] : j.at("countries").items()) {
            Entry e;
            e.ghg_1990 = entry.at("ghg_1990").get<double>();
            e.res_2020 = entry.at("res_2020").get<double>();
            e.gic_2010 = entry.at("gic_2010").get<double>();
            if (e.ghg_1990 <= 0 || e.gic_2010 <= 0 || e.res_2020 <= 0 || e.res_2020 > 1)
                throw Error::input("InvalidArgument", "target entry for " + code + " out of range");
            cfg.countries[code] = e;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("target config missing fields: ") + e.what());
    }
    return cfg;
}

TargetConfig TargetConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("MalformedRow", "cannot open target config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

TargetConfig TargetConfig::builtin() { return parse(kBuiltinTargetConfigJson); }

std::string TargetConfig::serialize() const {
    nlohmann::json j;
    j["version"] = version;
    for (const auto& [code, e] : countries) {
        j["countries"][code] = {
            {"ghg_1990", e.ghg_1990}, {"gic_2010", e.gic_2010}, {"res_2020", e.res_2020}};
    }
    return j.dump(2) + "\n";
}

double res_target(const TargetConfig& cfg, const std::string& country, Horizon horizon) {
    double national = cfg.at(country).res_2020;
    if (horizon == Horizon::Y2020) return national;
    return std::max(national, 0.27);
}

TargetSet make_ghg_target(const TargetConfig& cfg, const std::string& country, Horizon horizon) {
    TargetSet t;
    t.country = country;
    t.variable = "GHG";
    t.horizon = horizon;
    t.unit = "kt";
    t.direction = Direction::AtMost;
    t.derivation = "GhgCut";
    t.inputs["base_1990"] = cfg.at(country).ghg_1990;
    t.target_value = ghg_target(t.inputs["base_1990"], horizon);
    return t;
}

TargetSet make_res_target(const TargetConfig& cfg, const std::string& country, Horizon horizon) {
    TargetSet t;
    t.country = country;
    t.variable = "RES";
    t.horizon = horizon;
    t.unit = "fraction";
    t.direction = Direction::AtLeast;
    t.derivation = "ResShare";
    t.inputs["national_2020"] = cfg.at(country).res_2020;
    t.target_value = res_target(cfg, country, horizon);
    return t;
}

TargetSet make_consumption_target(const TargetConfig& cfg, const std::string& country,
                                  Horizon horizon) {
    TargetSet t;
    t.country = country;
    t.variable = "CONSM";
    t.horizon = horizon;
    t.unit = "GWh";
    t.direction = Direction::AtMost;
    t.derivation = "ConsumptionCut";
    t.inputs["gic_2010"] = cfg.at(country).gic_2010;
    auto ct = consumption_projection_and_target(t.inputs["gic_2010"], horizon);
    t.inputs["projection"] = ct.projection;
    t.target_value = ct.target;
    return t;
}

double rederive_target(const TargetSet& t) {
    if (t.derivation == "GhgCut") return ghg_target(t.inputs.at("base_1990"), t.horizon);
    if (t.derivation == "ResShare") {
        double national = t.inputs.at("national_2020");
        return t.horizon == Horizon::Y2020 ? national : std::max(national, 0.27);
    }
    if (t.derivation == "ConsumptionCut")
        return consumption_projection_and_target(t.inputs.at("gic_2010"), t.horizon).target;
    throw Error::input("InvalidArgument", "unknown target derivation '" + t.derivation + "'");
}

GrowthTable average_growth_rates(const PanelDataset& ds, const std::vector<std::string>& variables,
                                 bool geometric) {
    if (ds.frequency() != Frequency::Yearly)
        throw Error::input("InvalidArgument", "growth rates need a yearly panel");
    const int T = ds.n_periods();
    if (T < 2) throw Error::input("InsufficientObservations", "growth rates need at least 2 years");

    auto rate_of = [&](const Eigen::VectorXd& level, const std::string& label) {
        for (int t = 0; t < level.size(); ++t)
            if (PanelDataset::is_missing(level(t)) || level(t) <= 0.0)
                throw Error::input("NonPositiveSeries", label + " must be strictly positive");
        if (geometric)
            return std::pow(level(level.size() - 1) / level(0), 1.0 / (level.size() - 1)) - 1.0;
        double sum = 0.0;
        for (int t = 1; t < level.size(); ++t) sum += level(t) / level(t - 1) - 1.0;
        return sum / (level.size() - 1);
    };

    GrowthTable table;
    table.variables = variables;
    for (const auto& v : variables) {
        const auto& m = ds.values(v);
        Eigen::VectorXd total = Eigen::VectorXd::Zero(T);
        for (int j = 0; j < ds.n_countries(); ++j) {
            const auto& c = ds.countries()[static_cast<std::size_t>(j)];
            table.rates[c][v] = rate_of(m.col(j), v + "/" + c);
            total += m.col(j);
        }
        table.total[v] = rate_of(total, v + "/total");
    }
    return table;
}

double Scenario::rate(const std::string& variable, const std::string& country) const {
    auto vit = growth.find(variable);
    if (vit == growth.end())
        throw Error::input("MissingGrowthRate",
                           "scenario '" + name + "' has no growth rate for '" + variable + "'");
    auto cit = vit->second.find(country);
    if (cit != vit->second.end()) return cit->second;
    cit = vit->second.find("");
    if (cit != vit->second.end()) return cit->second;
    throw Error::input("MissingGrowthRate", "scenario '" + name + "' has no growth rate for '" +
                                                variable + "' in " + country);
}

void Scenario::validate() const {
    for (const auto& [var, by_country] : growth)
        for (const auto& [c, r] : by_country)
            if (!(r > -1.0))
                throw Error::input("InvalidArgument", "scenario '" + name + "': growth rate for " +
                                                          var + (c.empty() ? "" : "/" + c) +
                                                          " must exceed -1");
}

Scenario builtin_scenario(const std::string& name, const GrowthTable* table) {
    Scenario s;
    s.name = name;
    if (name == "A") {
        if (!table)
            throw Error::input("MissingGrowthTable", "scenario A needs a fitted growth-rate table");
        for (const auto& v : {std::string("CONSM"), std::string("RES")}) {
            bool found = false;
            for (const auto& [c, rates] : table->rates) {
                auto it = rates.find(v);
                if (it == rates.end()) continue;
                s.growth[v][c] = it->second;
                found = true;
            }
            if (!found)
                throw Error::input("MissingGrowthTable",
                                   "growth table lacks variable '" + v + "' needed by scenario A");
        }
    } else if (name == "B") {
        s.growth["CONSM"][""] = -0.02;
        s.growth["RES"][""] = 0.02;
    } else if (name == "C") {
        s.growth["CONSM"][""] = -0.02;
        s.growth["RES"][""] = 0.06;
    } else {
        throw Error::input("InvalidArgument", "unknown scenario '" + name + "' (expected A, B or C)");
    }
    s.validate();
    return s;
}

std::vector<Scenario> builtin_scenarios(const GrowthTable& table) {
    return {builtin_scenario("A", &table), builtin_scenario("B"), builtin_scenario("C")};
}

}  // namespace cepkit
