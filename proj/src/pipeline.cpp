#include "cepkit/pipeline.hpp"

#include <algorithm>
#include <set>

#include "cepkit/errors.hpp"
#include "cepkit/ingest.hpp"
#include "cepkit/regression.hpp"

namespace cepkit::pipeline {

namespace {

/// Restrict a dataset to the rows of an estimation sample (diagnostics
/// like VIF require complete cells).
PanelDataset slice_dataset(const PanelDataset& ds, const std::vector<Period>& sample) {
    int t0 = 0;
    while (t0 < ds.n_periods() && !(ds.time_index()[static_cast<std::size_t>(t0)] == sample.front()))
        ++t0;
    int T = static_cast<int>(sample.size());
    PanelDataset out(ds.countries(), sample);
    for (const auto& name : ds.variable_names()) {
        Eigen::MatrixXd m = ds.values(name).middleRows(t0, T);
        out = out.with_variable(name, ds.unit(name), std::move(m));
    }
    return out;
}

}  // namespace

PanelDataset apply_derivations(const PanelDataset& ds, const EstimateSpec& spec) {
    PanelDataset out = ds;
    for (const auto& d : spec.derive) out = derive_variable(out, d.name, d.rule, d.unit);
    return out;
}

EstimateOutput run_estimate(const PanelDataset& raw, const EstimateSpec& spec) {
    PanelDataset ds = apply_derivations(raw, spec);

    EstimateOutput out{.fit = {}, .wald = {}, .vif = {}, .hausman_report = {}, .table = {}};
    if (spec.estimator == "random_effects")
        out.fit = fit_random_effects(ds, spec.model, spec.options);
    else if (spec.estimator == "ols")
        out.fit = fit_ols(ds, spec.model, spec.options);
    else
        out.fit = fit_panel(ds, spec.model, spec.options);

    const int J = static_cast<int>(out.fit.countries.size());
    for (const auto& [name, scope] : spec.model.regressors)
        if (scope == SlopeScope::PerCountry && J >= 2)
            out.wald[name] = wald_slope_equality(out.fit, name);

    if (spec.model.regressors.size() >= 2) {
        std::vector<std::string> names;
        for (const auto& [name, _] : spec.model.regressors) names.push_back(name);
        out.vif = vif(slice_dataset(ds, out.fit.sample), names);
    }

    if (spec.hausman && J >= 2 && !spec.model.regressors.empty() &&
        spec.estimator != "random_effects") {
        try {
            ModelSpec fe_spec;
            fe_spec.dependent = spec.model.dependent;
            for (const auto& [name, _] : spec.model.regressors)
                fe_spec.regressors.emplace_back(name, SlopeScope::Pooled);
            fe_spec.dummies = spec.model.dummies;
            fe_spec.seasonal_effects = spec.model.seasonal_effects;
            fe_spec.country_effects = true;
            FitResult fe = fit_ols(ds, fe_spec, spec.options);
            ModelSpec re_spec = fe_spec;
            re_spec.country_effects = false;
            FitResult re = fit_random_effects(ds, re_spec, spec.options);
            out.hausman_report = hausman(fe, re);
        } catch (const Error&) {
            // Hausman comparator unavailable (e.g. too few countries for
            // the between regression); the table simply omits the row.
        }
    }

    RegressionTableInputs inputs;
    inputs.fit = &out.fit;
    inputs.wald = out.wald;
    inputs.vif = out.vif;
    inputs.hausman = out.hausman_report;
    out.table = build_regression_table(spec.layout, inputs);
    return out;
}

ModelsOutput run_models(const PanelDataset& yearly) {
    ModelsOutput out;
    std::vector<std::string> vars;
    for (const auto& v : {std::string("GHG"), std::string("CONSM"), std::string("RES")})
        if (yearly.has_variable(v)) vars.push_back(v);
    if (vars.empty())
        throw Error::input("UnknownVariable", "yearly panel has none of GHG, CONSM, RES");

    for (const auto& var : vars) {
        for (const auto& country : yearly.countries()) {
            YearlySeries s = yearly_series(yearly, var, country);
            std::vector<ForecastModel> candidates;
            candidates.emplace_back(fit_trend(s));
            if (s.values.size() >= 5) candidates.emplace_back(fit_ar2(s));
            if (var == "RES") candidates.emplace_back(fit_tobit(s));
            ModelSelection sel = select_model(candidates);
            out.models[var][country] = candidates[sel.chosen];
            out.selection[var][country] = std::move(sel);
        }
    }
    out.aic_table = build_aic_table(out.selection);
    out.growth_table = average_growth_rates(yearly, vars);
    out.t4 = build_t4(*out.growth_table);
    if (vars.size() == 3) {
        FitResult fit = fit_pooled_growth(yearly);
        out.growth_model = make_growth_model(fit, yearly);
    }
    return out;
}

nlohmann::json ModelsOutput::to_json() const {
    nlohmann::json j;
    for (const auto& [var, by_country] : models)
        for (const auto& [c, m] : by_country) j["models"][var][c] = model_to_json(m);
    for (const auto& [var, by_country] : selection)
        for (const auto& [c, sel] : by_country) {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : sel.table)
                rows.push_back({{"model", r.name}, {"n_params", r.n_params}, {"loglik", r.loglik}, {"aic", r.aic}});
            j["selection"][var][c] = {{"chosen", sel.table[sel.chosen].name}, {"candidates", rows}};
        }
    if (growth_model) j["growth_model"] = model_to_json(*growth_model);
    if (growth_table) {
        for (const auto& [c, rates] : growth_table->rates)
            for (const auto& [v, r] : rates) j["growth_rates"][c][v] = r;
        for (const auto& [v, r] : growth_table->total) j["growth_rates"]["Total"][v] = r;
    }
    return j;
}

ForecastOutput run_forecast(const ModelsOutput& models, const TargetConfig& cfg, int n_paths,
                            std::uint64_t master_seed, int n_workers) {
    ForecastOutput out;
    for (const auto& [var, by_country] : models.models) {
        for (int year : {2020, 2030}) {
            EnsembleByCountry e;
            for (const auto& [country, model] : by_country) {
                SimOptions opts;
                opts.n_paths = n_paths;
                opts.master_seed = master_seed;
                opts.n_workers = n_workers;
                opts.country = country;
                opts.variable = var;
                e.emplace(country, simulate(model, year, opts));
            }
            out.ensembles[var][year] = std::move(e);
        }
    }

    auto qjson = [&](const TrajectoryEnsemble& e, double target, Direction dir) {
        auto q = quantiles(e, {0.01, 0.5, 0.99});
        return nlohmann::json{{"q01", q.at(0.01)},
                              {"q50", q.at(0.5)},
                              {"q99", q.at(0.99)},
                              {"target", target},
                              {"compliance", compliance_probability(e, target, dir)}};
    };

    for (const auto& [var, by_year] : out.ensembles)
        for (const auto& [year, e] : by_year)
            for (const auto& [country, ens] : e) {
                Horizon h = year == 2020 ? Horizon::Y2020 : Horizon::Y2030;
                if (var == "GHG")
                    out.quantile_json[var][std::to_string(year)][country] =
                        qjson(ens, ghg_target(cfg.at(country).ghg_1990, h), Direction::AtMost);
                else if (var == "RES")
                    out.quantile_json[var][std::to_string(year)][country] =
                        qjson(ens, res_target(cfg, country, h), Direction::AtLeast);
                else if (var == "CONSM")
                    out.quantile_json[var][std::to_string(year)][country] =
                        qjson(ens, consumption_projection_and_target(cfg.at(country).gic_2010, h).target,
                              Direction::AtMost);
            }

    if (out.ensembles.count("GHG"))
        out.t3 = build_t3(cfg, out.ensembles.at("GHG").at(2020), out.ensembles.at("GHG").at(2030));
    if (out.ensembles.count("RES"))
        out.t6 = build_t6(cfg, out.ensembles.at("RES").at(2020), out.ensembles.at("RES").at(2030));
    if (out.ensembles.count("CONSM"))
        out.t7 = build_t7(cfg, out.ensembles.at("CONSM").at(2020), out.ensembles.at("CONSM").at(2030));
    return out;
}

ScenarioOutput run_scenarios(const PooledGrowthModel& growth, const std::vector<Scenario>& scenarios,
                             const TargetConfig& cfg, int n_paths, std::uint64_t master_seed,
                             int n_workers) {
    ScenarioOutput out;
    for (const auto& sc : scenarios) {
        ScenarioPanel panel;
        panel.name = sc.name;
        panel.e2020 = simulate_growth(growth, sc, 2020, n_paths, master_seed, n_workers);
        panel.e2030 = simulate_growth(growth, sc, 2030, n_paths, master_seed, n_workers);
        for (const auto& [country, e] : panel.e2020) {
            auto q20 = quantiles(e, {0.01, 0.5});
            auto q30 = quantiles(panel.e2030.at(country), {0.01, 0.5});
            out.quantile_json[sc.name][country] = {{"q01_2020", q20.at(0.01)},
                                                   {"q50_2020", q20.at(0.5)},
                                                   {"q01_2030", q30.at(0.01)},
                                                   {"q50_2030", q30.at(0.5)}};
        }
        out.panels.push_back(std::move(panel));
    }
    out.t5 = build_t5(cfg, growth.start_levels, out.panels);
    return out;
}

nlohmann::json run_report(const RunConfig& cfg, const std::string& out_dir) {
    const bool stochastic = cfg.yearly.has_value();
    if (stochastic && !cfg.seed_set)
        throw Error::input("MissingSeed", "a master seed is required for simulation commands");

    TargetConfig targets = cfg.targets.empty() ? TargetConfig::builtin() : TargetConfig::load(cfg.targets);

    ArtifactWriter writer(out_dir);
    std::map<std::string, std::string> inputs;
    const bool emit_text = cfg.format != "csv";
    const bool emit_csv = cfg.format != "table";

    auto add_table = [&](const Table& t) {
        std::string base = "table_" + t.name;
        std::transform(base.begin(), base.end(), base.begin(), ::tolower);
        if (emit_text) writer.add(base + ".txt", t.to_text());
        if (emit_csv) writer.add(base + ".csv", t.to_csv());
    };

    auto diagnostics_json = [](const EstimateOutput& e) {
        nlohmann::json d;
        for (const auto& [name, rep] : e.wald) d["wald"][name] = report_to_json(rep);
        if (e.vif) {
            for (const auto& [name, v] : e.vif->values)
                d["vif"][name] = std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v);
            if (!e.vif->offenders.empty()) d["vif_offenders"] = e.vif->offenders;
        }
        if (e.hausman_report) d["hausman"] = report_to_json(*e.hausman_report);
        return d;
    };

    auto run_stage = [&](const RunConfig::Stage& stage, Frequency freq, const std::string& label) {
        auto schema = load_schema(stage.schema);
        PanelDataset ds = ingest_csv_file(stage.input, schema, freq);
        EstimateSpec spec = load_estimate_spec(stage.spec, freq);
        EstimateOutput est = run_estimate(ds, spec);
        writer.add("fit_" + label + ".json", serialize_fit(est.fit));
        writer.add("diagnostics_" + label + ".json", diagnostics_json(est).dump(2) + "\n");
        add_table(est.table);
        inputs[label + "_input"] = stage.input;
        inputs[label + "_schema"] = stage.schema;
        inputs[label + "_spec"] = stage.spec;
    };

    if (cfg.monthly) run_stage(*cfg.monthly, Frequency::Monthly, "wholesale");
    if (cfg.biannual) run_stage(*cfg.biannual, Frequency::Biannual, "wedge");

    if (cfg.yearly) {
        auto schema = load_schema(cfg.yearly->schema);
        PanelDataset yearly = ingest_csv_file(cfg.yearly->input, schema, Frequency::Yearly);
        inputs["yearly_input"] = cfg.yearly->input;
        inputs["yearly_schema"] = cfg.yearly->schema;

        ModelsOutput models = run_models(yearly);
        writer.add("models.json", models.to_json().dump(2) + "\n");
        add_table(models.aic_table);
        if (models.t4) add_table(*models.t4);

        ForecastOutput fc = run_forecast(models, targets, cfg.n_paths, cfg.master_seed, cfg.n_workers);
        writer.add("forecast_quantiles.json", fc.quantile_json.dump(2) + "\n");
        if (fc.t3) add_table(*fc.t3);
        if (fc.t6) add_table(*fc.t6);
        if (fc.t7) add_table(*fc.t7);

        if (models.growth_model && !cfg.scenarios.empty()) {
            writer.add("growth_model.json", serialize_model(*models.growth_model));
            std::vector<Scenario> scen;
            for (const auto& name : cfg.scenarios) {
                if (name == "A" || name == "B" || name == "C")
                    scen.push_back(builtin_scenario(name, models.growth_table ? &*models.growth_table : nullptr));
                else
                    scen.push_back(parse_scenario(load_json_file(name)));
            }
            ScenarioOutput sc =
                run_scenarios(*models.growth_model, scen, targets, cfg.n_paths, cfg.master_seed, cfg.n_workers);
            writer.add("scenario_quantiles.json", sc.quantile_json.dump(2) + "\n");
            add_table(sc.t5);
        }
    }

    nlohmann::json config_json;
    auto stage_json = [](const RunConfig::Stage& s) {
        return nlohmann::json{{"input", s.input}, {"schema", s.schema}, {"spec", s.spec}};
    };
    if (cfg.monthly) config_json["monthly"] = stage_json(*cfg.monthly);
    if (cfg.biannual) config_json["biannual"] = stage_json(*cfg.biannual);
    if (cfg.yearly) config_json["yearly"] = stage_json(*cfg.yearly);
    config_json["targets"] = cfg.targets;
    config_json["scenarios"] = cfg.scenarios;
    config_json["n_paths"] = cfg.n_paths;
    config_json["master_seed"] = cfg.master_seed;
    config_json["format"] = cfg.format;
    return writer.commit("report", config_json, cfg.master_seed, inputs);
}

}  // namespace cepkit::pipeline
