#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cepkit/config_io.hpp"
#include "cepkit/diagnostics.hpp"
#include "cepkit/ingest.hpp"
#include "cepkit/montecarlo.hpp"
#include "cepkit/pipeline.hpp"
#include "cepkit/regression.hpp"
#include "cepkit/serialize.hpp"
#include "cepkit/stats.hpp"

namespace py = pybind11;
using namespace cepkit;

namespace {

ModelSpec spec_from_json_text(const std::string& text) {
    return parse_model_spec(nlohmann::json::parse(text));
}

Scenario scenario_from_json_text(const std::string& text) {
    return parse_scenario(nlohmann::json::parse(text));
}

Horizon horizon_of(int year) {
    if (year == 2020) return Horizon::Y2020;
    if (year == 2030) return Horizon::Y2030;
    throw Error::input("InvalidArgument", "horizon must be 2020 or 2030");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Panel electricity-price regressions, diagnostics and CEP target simulations";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<PanelDataset>(m, "PanelDataset")
        .def_property_readonly("countries", &PanelDataset::countries)
        .def_property_readonly("periods",
                               [](const PanelDataset& ds) {
                                   std::vector<std::string> out;
                                   for (const auto& p : ds.time_index()) out.push_back(p.label());
                                   return out;
                               })
        .def_property_readonly("variables", &PanelDataset::variable_names)
        .def("values", [](const PanelDataset& ds, const std::string& name) { return ds.values(name); })
        .def("unit", [](const PanelDataset& ds, const std::string& name) { return ds.unit(name); })
        .def("series", &PanelDataset::series)
        .def("to_csv", [](const PanelDataset& ds) {
            std::ostringstream out;
            write_csv(ds, out);
            return out.str();
        });

    m.def("ingest_csv", [](const std::string& csv_text, const std::string& schema_text,
                           const std::string& freq) {
        std::istringstream schema_in(schema_text);
        auto schema = parse_schema(schema_in);
        std::istringstream in(csv_text);
        return ingest_csv(in, schema, parse_frequency(freq));
    }, py::arg("csv_text"), py::arg("schema_text"), py::arg("frequency"));

    m.def("ingest_csv_file", [](const std::string& path, const std::string& schema_path,
                                const std::string& freq) {
        return ingest_csv_file(path, load_schema(schema_path), parse_frequency(freq));
    });

    m.def("derive_variable",
          [](const PanelDataset& ds, const std::string& name, const std::string& kind,
             const std::string& a, const std::string& b, const std::string& cutover,
             const std::string& unit) {
              Derivation rule;
              if (kind == "res_share") rule = Derivation::res_share(a, b);
              else if (kind == "wedge") rule = Derivation::wedge(a, b);
              else if (kind == "net_balance") rule = Derivation::net_balance(a, b);
              else if (kind == "lagged_diff") rule = Derivation::lagged_diff(a);
              else if (kind == "step_dummy")
                  rule = Derivation::step_dummy(Period::parse(cutover, ds.frequency()));
              else throw Error::input("InvalidArgument", "unknown derivation kind '" + kind + "'");
              return derive_variable(ds, name, rule, unit);
          },
          py::arg("ds"), py::arg("name"), py::arg("kind"), py::arg("a") = "", py::arg("b") = "",
          py::arg("cutover") = "", py::arg("unit") = "unit");

    py::class_<FitResult>(m, "FitResult")
        .def("coefficient", &FitResult::coefficient, py::arg("regressor"), py::arg("country") = "")
        .def("std_error", &FitResult::std_error, py::arg("regressor"), py::arg("country") = "")
        .def_property_readonly("names",
                               [](const FitResult& f) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& k : f.names) out.emplace_back(k.regressor, k.country);
                                   return out;
                               })
        .def_readonly("beta", &FitResult::beta)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("residuals", &FitResult::residuals)
        .def_readonly("innovations", &FitResult::innovations)
        .def_readonly("sigma_cross", &FitResult::sigma_cross)
        .def_readonly("loglik", &FitResult::loglik)
        .def_readonly("r2", &FitResult::r2)
        .def_readonly("r2_adjusted", &FitResult::r2_adjusted)
        .def_readonly("dw", &FitResult::dw)
        .def_readonly("n_obs", &FitResult::n_obs)
        .def_readonly("n_params", &FitResult::n_params)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("flags", &FitResult::flags)
        .def_readonly("details", &FitResult::details)
        .def("serialize", [](const FitResult& f) { return serialize_fit(f); });

    m.def("fit_panel", [](const PanelDataset& ds, const std::string& spec_json) {
        return fit_panel(ds, spec_from_json_text(spec_json));
    });
    m.def("fit_ols", [](const PanelDataset& ds, const std::string& spec_json) {
        return fit_ols(ds, spec_from_json_text(spec_json));
    });
    m.def("fit_fgls_sur", [](const PanelDataset& ds, const std::string& spec_json) {
        return fit_fgls_sur(ds, spec_from_json_text(spec_json));
    });
    m.def("fit_random_effects", [](const PanelDataset& ds, const std::string& spec_json) {
        return fit_random_effects(ds, spec_from_json_text(spec_json));
    });
    m.def("fit_pooled_growth",
          [](const PanelDataset& ds, const std::string& dep, const std::vector<std::string>& regs) {
              return fit_pooled_growth(ds, dep, regs);
          },
          py::arg("ds"), py::arg("dependent") = "GHG",
          py::arg("regressors") = std::vector<std::string>{"CONSM", "RES"});

    py::class_<TestReport>(m, "TestReport")
        .def_readonly("name", &TestReport::name)
        .def_readonly("statistic", &TestReport::statistic)
        .def_readonly("dof", &TestReport::dof)
        .def_readonly("p_value", &TestReport::p_value)
        .def_readonly("note", &TestReport::verdict_note)
        .def_readonly("flags", &TestReport::flags);

    m.def("wald_slope_equality", &wald_slope_equality);
    m.def("hausman", &hausman);
    m.def("vif", [](const PanelDataset& ds, const std::vector<std::string>& names) {
        return vif(ds, names).values;
    });
    m.def("durbin_watson", [](const Eigen::MatrixXd& resid) { return durbin_watson(resid); });
    m.def("aic", &aic);
    m.def("chi2_sf", &chi2_sf);

    py::class_<TrendModel>(m, "TrendModel")
        .def_readonly("beta0", &TrendModel::beta0)
        .def_readonly("beta1", &TrendModel::beta1)
        .def_readonly("sigma", &TrendModel::sigma)
        .def_readonly("t0_year", &TrendModel::t0_year)
        .def_readonly("loglik", &TrendModel::loglik);
    py::class_<Ar2Model>(m, "Ar2Model")
        .def_readonly("mu", &Ar2Model::mu)
        .def_readonly("rho1", &Ar2Model::rho1)
        .def_readonly("rho2", &Ar2Model::rho2)
        .def_readonly("sigma", &Ar2Model::sigma)
        .def_readonly("stationary", &Ar2Model::stationary)
        .def_readonly("loglik", &Ar2Model::loglik);
    py::class_<TobitModel>(m, "TobitModel")
        .def_readonly("beta0", &TobitModel::beta0)
        .def_readonly("beta1", &TobitModel::beta1)
        .def_readonly("sigma", &TobitModel::sigma)
        .def_readonly("n_censored", &TobitModel::n_censored)
        .def_readonly("converged", &TobitModel::converged)
        .def_readonly("loglik", &TobitModel::loglik);

    auto make_series = [](const std::vector<int>& years, const Eigen::VectorXd& values) {
        YearlySeries s;
        s.years = years;
        s.values = values;
        return s;
    };
    m.def("fit_trend", [make_series](const std::vector<int>& years, const Eigen::VectorXd& v) {
        return fit_trend(make_series(years, v));
    });
    m.def("fit_ar2", [make_series](const std::vector<int>& years, const Eigen::VectorXd& v) {
        return fit_ar2(make_series(years, v));
    });
    m.def("fit_tobit", [make_series](const std::vector<int>& years, const Eigen::VectorXd& v) {
        return fit_tobit(make_series(years, v));
    });

    py::class_<TrajectoryEnsemble>(m, "TrajectoryEnsemble")
        .def_readonly("country", &TrajectoryEnsemble::country)
        .def_readonly("variable", &TrajectoryEnsemble::variable)
        .def_readonly("horizon_years", &TrajectoryEnsemble::horizon_years)
        .def_readonly("paths", &TrajectoryEnsemble::paths)
        .def_readonly("master_seed", &TrajectoryEnsemble::master_seed)
        .def_readonly("model_fingerprint", &TrajectoryEnsemble::model_fingerprint)
        .def("terminal", &TrajectoryEnsemble::terminal);

    auto sim = [](const ForecastModel& model, int end_year, int n_paths, std::uint64_t seed,
                  const std::string& country, const std::string& variable, int workers) {
        SimOptions opts;
        opts.n_paths = n_paths;
        opts.master_seed = seed;
        opts.n_workers = workers;
        opts.country = country;
        opts.variable = variable;
        return simulate(model, end_year, opts);
    };
    m.def("simulate",
          [sim](const TrendModel& model, int end_year, int n_paths, std::uint64_t seed,
                const std::string& country, const std::string& variable, int workers) {
              return sim(model, end_year, n_paths, seed, country, variable, workers);
          },
          py::arg("model"), py::arg("end_year"), py::arg("n_paths"), py::arg("seed"),
          py::arg("country") = "", py::arg("variable") = "", py::arg("workers") = 1);
    m.def("simulate",
          [sim](const Ar2Model& model, int end_year, int n_paths, std::uint64_t seed,
                const std::string& country, const std::string& variable, int workers) {
              return sim(model, end_year, n_paths, seed, country, variable, workers);
          },
          py::arg("model"), py::arg("end_year"), py::arg("n_paths"), py::arg("seed"),
          py::arg("country") = "", py::arg("variable") = "", py::arg("workers") = 1);
    m.def("simulate",
          [sim](const TobitModel& model, int end_year, int n_paths, std::uint64_t seed,
                const std::string& country, const std::string& variable, int workers) {
              return sim(model, end_year, n_paths, seed, country, variable, workers);
          },
          py::arg("model"), py::arg("end_year"), py::arg("n_paths"), py::arg("seed"),
          py::arg("country") = "", py::arg("variable") = "", py::arg("workers") = 1);

    py::class_<PooledGrowthModel>(m, "PooledGrowthModel")
        .def("serialize", [](const PooledGrowthModel& g) { return serialize_model(g); });
    m.def("make_growth_model", &make_growth_model, py::arg("fit"), py::arg("ds"),
          py::arg("dependent") = "GHG");
    m.def("simulate_growth",
          [](const PooledGrowthModel& model, const std::string& scenario_json, int end_year,
             int n_paths, std::uint64_t seed, int workers) {
              return simulate_growth(model, scenario_from_json_text(scenario_json), end_year,
                                     n_paths, seed, workers);
          },
          py::arg("model"), py::arg("scenario_json"), py::arg("end_year"), py::arg("n_paths"),
          py::arg("seed"), py::arg("workers") = 1);

    m.def("quantiles", [](const TrajectoryEnsemble& e, const std::vector<double>& qs) {
        return quantiles(e, qs);
    });
    m.def("compliance_probability",
          [](const TrajectoryEnsemble& e, double target, const std::string& dir) {
              return compliance_probability(e, target,
                                            dir == "at_least" ? Direction::AtLeast : Direction::AtMost);
          },
          py::arg("ensemble"), py::arg("target"), py::arg("direction") = "at_most");

    m.def("ghg_target", [](double base, int year) { return ghg_target(base, horizon_of(year)); });
    m.def("consumption_projection_and_target", [](double gic, int year) {
        auto ct = consumption_projection_and_target(gic, horizon_of(year));
        return std::make_pair(ct.projection, ct.target);
    });
    m.def("res_target", [](const std::string& country, int year) {
        return res_target(TargetConfig::builtin(), country, horizon_of(year));
    });
    m.def("builtin_targets_json", []() { return TargetConfig::builtin().serialize(); });
    m.def("builtin_scenario_json", [](const std::string& name) {
        return scenario_to_json(builtin_scenario(name)).dump();
    });
    m.def("average_growth_rates",
          [](const PanelDataset& ds, const std::vector<std::string>& vars, bool geometric) {
              auto t = average_growth_rates(ds, vars, geometric);
              return std::make_pair(t.rates, t.total);
          },
          py::arg("ds"), py::arg("variables"), py::arg("geometric") = false);

    m.def("run_report", [](const std::string& config_path, const std::string& out_dir) {
        RunConfig cfg = parse_run_config(load_json_file(config_path));
        return pipeline::run_report(cfg, out_dir).dump(2);
    });
}
