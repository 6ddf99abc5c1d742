#include "cepkit/serialize.hpp"

#include "cepkit/errors.hpp"

namespace cepkit {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::json fit_to_json(const FitResult& fit) {
    nlohmann::json j;
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < fit.names.size(); ++i) {
        coeffs.push_back({{"regressor", fit.names[i].regressor},
                          {"country", fit.names[i].country},
                          {"value", fit.beta(static_cast<int>(i))},
                          {"se", std::sqrt(std::max(0.0, fit.covariance(static_cast<int>(i),
                                                                        static_cast<int>(i))))}});
    }
    j["coefficients"] = std::move(coeffs);
    j["countries"] = fit.countries;
    j["sample"] = {{"first", fit.sample.front().label()}, {"last", fit.sample.back().label()}};
    j["stats"] = {{"loglik", fit.loglik},   {"r2", fit.r2},       {"r2_adjusted", fit.r2_adjusted},
                  {"dw", fit.dw},           {"n_obs", fit.n_obs}, {"n_params", fit.n_params},
                  {"converged", fit.converged}, {"iterations", fit.iterations}};
    j["sigma_cross"] = matrix_to_json(fit.sigma_cross);
    j["flags"] = fit.flags;
    j["details"] = fit.details;
    return j;
}

std::string serialize_fit(const FitResult& fit) { return fit_to_json(fit).dump(2) + "\n"; }

nlohmann::json report_to_json(const TestReport& report) {
    return {{"name", report.name},       {"statistic", report.statistic},
            {"dof", report.dof},         {"p_value", report.p_value},
            {"note", report.verdict_note}, {"flags", report.flags}};
}

nlohmann::json model_to_json(const ForecastModel& model) {
    nlohmann::json j;
    if (const auto* m = std::get_if<TrendModel>(&model)) {
        j["kind"] = "trend";
        j["beta0"] = m->beta0;
        j["beta1"] = m->beta1;
        j["sigma"] = m->sigma;
        j["t0_year"] = m->t0_year;
        j["last_obs"] = {{"year", m->last_obs.first}, {"value", m->last_obs.second}};
        j["loglik"] = m->loglik;
        j["n_obs"] = m->n_obs;
    } else if (const auto* a = std::get_if<Ar2Model>(&model)) {
        j["kind"] = "ar2";
        j["mu"] = a->mu;
        j["rho1"] = a->rho1;
        j["rho2"] = a->rho2;
        j["sigma"] = a->sigma;
        j["last_two_obs"] = {{{"year", a->last_two_obs[0].first}, {"value", a->last_two_obs[0].second}},
                             {{"year", a->last_two_obs[1].first}, {"value", a->last_two_obs[1].second}}};
        j["stationary"] = a->stationary;
        j["loglik"] = a->loglik;
        j["n_obs"] = a->n_obs;
    } else {
        const auto& t = std::get<TobitModel>(model);
        j["kind"] = "tobit";
        j["beta0"] = t.beta0;
        j["beta1"] = t.beta1;
        j["sigma"] = t.sigma;
        j["t0_year"] = t.t0_year;
        j["last_obs"] = {{"year", t.last_obs.first}, {"value", t.last_obs.second}};
        j["loglik"] = t.loglik;
        j["n_obs"] = t.n_obs;
        j["n_censored"] = t.n_censored;
        j["converged"] = t.converged;
    }
    return j;
}

std::string serialize_model(const ForecastModel& model) { return model_to_json(model).dump() + "\n"; }

ForecastModel parse_forecast_model(const nlohmann::json& j) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "trend") {
            TrendModel m;
            m.beta0 = j.at("beta0").get<double>();
            m.beta1 = j.at("beta1").get<double>();
            m.sigma = j.at("sigma").get<double>();
            m.t0_year = j.at("t0_year").get<int>();
            m.last_obs = {j.at("last_obs").at("year").get<int>(),
                          j.at("last_obs").at("value").get<double>()};
            m.loglik = j.value("loglik", 0.0);
            m.n_obs = j.value("n_obs", 0);
            return m;
        }
        if (kind == "ar2") {
            Ar2Model m;
            m.mu = j.at("mu").get<double>();
            m.rho1 = j.at("rho1").get<double>();
            m.rho2 = j.at("rho2").get<double>();
            m.sigma = j.at("sigma").get<double>();
            m.last_two_obs = {
                std::pair{j.at("last_two_obs").at(0).at("year").get<int>(),
                          j.at("last_two_obs").at(0).at("value").get<double>()},
                std::pair{j.at("last_two_obs").at(1).at("year").get<int>(),
                          j.at("last_two_obs").at(1).at("value").get<double>()}};
            m.stationary = j.value("stationary", true);
            m.loglik = j.value("loglik", 0.0);
            m.n_obs = j.value("n_obs", 0);
            return m;
        }
        if (kind == "tobit") {
            TobitModel m;
            m.beta0 = j.at("beta0").get<double>();
            m.beta1 = j.at("beta1").get<double>();
            m.sigma = j.at("sigma").get<double>();
            m.t0_year = j.at("t0_year").get<int>();
            m.last_obs = {j.at("last_obs").at("year").get<int>(),
                          j.at("last_obs").at("value").get<double>()};
            m.loglik = j.value("loglik", 0.0);
            m.n_obs = j.value("n_obs", 0);
            m.n_censored = j.value("n_censored", 0);
            m.converged = j.value("converged", true);
            return m;
        }
        throw Error::input("MalformedRow", "unknown forecast model kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad forecast model JSON: ") + e.what());
    }
}

nlohmann::json model_to_json(const PooledGrowthModel& model) {
    nlohmann::json j;
    j["kind"] = "pooled_growth";
    j["drivers"] = {model.drivers[0], model.drivers[1]};
    for (const auto& [c, g] : model.by_country)
        j["by_country"][c] = {
            {"beta0", g.beta0}, {"beta1", g.beta1}, {"beta2", g.beta2}, {"sigma", g.sigma}};
    for (const auto& [c, lvl] : model.start_levels)
        j["start_levels"][c] = {{"level", lvl.first}, {"year", lvl.second}};
    return j;
}

std::string serialize_model(const PooledGrowthModel& model) {
    return model_to_json(model).dump() + "\n";
}

PooledGrowthModel parse_growth_model(const nlohmann::json& j) {
    try {
        PooledGrowthModel m;
        m.drivers[0] = j.at("drivers").at(0).get<std::string>();
        m.drivers[1] = j.at("drivers").at(1).get<std::string>();
        for (const auto& [c, g] : j.at("by_country").items()) {
            CountryGrowth cg;
            cg.beta0 = g.at("beta0").get<double>();
            cg.beta1 = g.at("beta1").get<double>();
            cg.beta2 = g.at("beta2").get<double>();
            cg.sigma = g.at("sigma").get<double>();
            m.by_country[c] = cg;
        }
        for (const auto& [c, lvl] : j.at("start_levels").items())
            m.start_levels[c] = {lvl.at("level").get<double>(), lvl.at("year").get<int>()};
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad growth model JSON: ") + e.what());
    }
}

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    for (const auto& [var, by_country] : s.growth)
        for (const auto& [c, r] : by_country) j["growth"][var][c.empty() ? "*" : c] = r;
    return j;
}

Scenario parse_scenario(const nlohmann::json& j) {
    try {
        Scenario s;
        s.name = j.at("name").get<std::string>();
        for (const auto& [var, entry] : j.at("growth").items()) {
            if (entry.is_number()) {
                s.growth[var][""] = entry.get<double>();
            } else {
                for (const auto& [c, r] : entry.items())
                    s.growth[var][c == "*" ? "" : c] = r.get<double>();
            }
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error::input("MalformedRow", std::string("bad scenario JSON: ") + e.what());
    }
}

}  // namespace cepkit
