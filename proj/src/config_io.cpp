#include "cepkit/config_io.hpp"

#include <fstream>
#include <sstream>

#include "cepkit/errors.hpp"

namespace cepkit {

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("MalformedRow", "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", "'" + path + "' is not valid JSON: " + e.what());
    }
}

DerivationSpec parse_derivation(const nlohmann::json& j, Frequency freq) {
    try {
        DerivationSpec spec;
        spec.name = j.at("name").get<std::string>();
        spec.unit = j.value("unit", "unit");
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "res_share")
            spec.rule = Derivation::res_share(j.at("a").get<std::string>(), j.at("b").get<std::string>());
        else if (kind == "wedge")
            spec.rule = Derivation::wedge(j.at("a").get<std::string>(), j.at("b").get<std::string>());
        else if (kind == "net_balance")
            spec.rule = Derivation::net_balance(j.at("a").get<std::string>(), j.at("b").get<std::string>());
        else if (kind == "lagged_diff")
            spec.rule = Derivation::lagged_diff(j.at("a").get<std::string>());
        else if (kind == "step_dummy")
            spec.rule = Derivation::step_dummy(Period::parse(j.at("cutover").get<std::string>(), freq));
        else
            throw Error::input("MalformedRow", "unknown derivation kind '" + kind + "'");
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad derivation spec: ") + e.what());
    }
}

ModelSpec parse_model_spec(const nlohmann::json& j) {
    try {
        ModelSpec m;
        m.dependent = j.at("dependent").get<std::string>();
        for (const auto& r : j.at("regressors")) {
            std::string scope = r.value("scope", "per_country");
            if (scope != "per_country" && scope != "pooled")
                throw Error::input("MalformedRow", "regressor scope must be per_country or pooled");
            m.regressors.emplace_back(r.at("name").get<std::string>(),
                                      scope == "pooled" ? SlopeScope::Pooled : SlopeScope::PerCountry);
        }
        for (const auto& fe : j.value("fixed_effects", nlohmann::json::array())) {
            std::string name = fe.get<std::string>();
            if (name == "country")
                m.country_effects = true;
            else if (name == "seasonal")
                m.seasonal_effects = true;
            else
                throw Error::input("MalformedRow", "fixed effect must be country or seasonal");
        }
        for (const auto& d : j.value("dummies", nlohmann::json::array()))
            m.dummies.push_back(d.get<std::string>());
        for (const auto& l : j.value("ar", nlohmann::json::array())) m.arma.ar.push_back(l.get<int>());
        for (const auto& l : j.value("ma", nlohmann::json::array())) m.arma.ma.push_back(l.get<int>());
        std::string arma_scope = j.value("arma_scope", "pooled");
        m.arma_scope = arma_scope == "per_country" ? SlopeScope::PerCountry : SlopeScope::Pooled;
        std::string w = j.value("weighting", "none");
        if (w == "cross_section_sur")
            m.weighting = Weighting::CrossSectionSUR;
        else if (w != "none")
            throw Error::input("MalformedRow", "weighting must be none or cross_section_sur");
        std::string cov = j.value("covariance", "classical");
        if (cov == "pcse")
            m.covariance = CovarianceType::PCSE;
        else if (cov != "classical")
            throw Error::input("MalformedRow", "covariance must be classical or pcse");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad model spec: ") + e.what());
    }
}

EstimateSpec parse_estimate_spec(const nlohmann::json& j, Frequency freq) {
    try {
        EstimateSpec spec;
        for (const auto& d : j.value("derive", nlohmann::json::array()))
            spec.derive.push_back(parse_derivation(d, freq));
        spec.model = parse_model_spec(j.at("model"));
        spec.estimator = j.value("estimator", "panel");
        if (spec.estimator != "panel" && spec.estimator != "ols" && spec.estimator != "random_effects")
            throw Error::input("MalformedRow", "estimator must be panel, ols or random_effects");
        if (j.contains("options")) {
            const auto& o = j.at("options");
            spec.options.tol = o.value("tol", spec.options.tol);
            spec.options.max_iter = o.value("max_iter", spec.options.max_iter);
            spec.options.two_step = o.value("two_step", spec.options.two_step);
        }
        spec.layout = j.value("layout", "T1");
        spec.hausman = j.value("hausman", true);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad estimate spec: ") + e.what());
    }
}

EstimateSpec load_estimate_spec(const std::string& path, Frequency freq) {
    return parse_estimate_spec(load_json_file(path), freq);
}

RunConfig parse_run_config(const nlohmann::json& j) {
    try {
        RunConfig cfg;
        auto parse_stage = [&](const char* key) -> std::optional<RunConfig::Stage> {
            if (!j.contains(key)) return std::nullopt;
            const auto& s = j.at(key);
            RunConfig::Stage st;
            st.input = s.at("input").get<std::string>();
            st.schema = s.at("schema").get<std::string>();
            st.spec = s.value("spec", "");
            return st;
        };
        cfg.monthly = parse_stage("monthly");
        cfg.biannual = parse_stage("biannual");
        cfg.yearly = parse_stage("yearly");
        cfg.targets = j.value("targets", "");
        if (j.contains("scenarios")) {
            cfg.scenarios.clear();
            for (const auto& s : j.at("scenarios")) cfg.scenarios.push_back(s.get<std::string>());
        }
        cfg.n_paths = j.value("n_paths", cfg.n_paths);
        if (j.contains("master_seed")) {
            cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
            cfg.seed_set = true;
        }
        cfg.format = j.value("format", cfg.format);
        cfg.n_workers = j.value("n_workers", 1);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad run config: ") + e.what());
    }
}

}  // namespace cepkit
