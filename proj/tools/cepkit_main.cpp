#include <CLI11.hpp>
#include <iostream>

#include "cepkit/ingest.hpp"
#include "cepkit/pipeline.hpp"

namespace {

using namespace cepkit;

int exit_code(ErrorCategory cat) {
    switch (cat) {
        case ErrorCategory::Input: return 2;
        case ErrorCategory::Numerical: return 3;
        case ErrorCategory::NonConvergence: return 4;
    }
    return 3;
}

struct CommonArgs {
    std::string input, schema, spec, out = ".";
    std::string freq = "monthly";
    std::string format = "both";
    std::string targets;
    int n_paths = 100000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    bool terminals = false;
};

void add_seed_option(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option_function<std::uint64_t>(
           "--seed",
           [&args](const std::uint64_t& s) {
               args.seed = s;
               args.seed_set = true;
           },
           "Master seed (required: stochastic commands refuse to run unseeded)")
        ->required();
}

nlohmann::json cli_config_json(const CommonArgs& a, const std::string& command) {
    // worker count is an execution detail: results are worker-invariant,
    // so it stays out of the recorded config
    return {{"command", command}, {"input", a.input},   {"schema", a.schema},
            {"spec", a.spec},     {"format", a.format}, {"targets", a.targets},
            {"n_paths", a.n_paths}};
}

void add_tables(ArtifactWriter& w, const Table& t, const std::string& format) {
    std::string base = "table_" + t.name;
    std::transform(base.begin(), base.end(), base.begin(), ::tolower);
    if (format != "csv") w.add(base + ".txt", t.to_text());
    if (format != "table") w.add(base + ".csv", t.to_csv());
}

nlohmann::json diagnostics_to_json(const pipeline::EstimateOutput& est) {
    nlohmann::json d;
    for (const auto& [name, rep] : est.wald) d["wald"][name] = report_to_json(rep);
    if (est.vif) {
        for (const auto& [name, v] : est.vif->values)
            d["vif"][name] = std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v);
        if (!est.vif->offenders.empty()) d["vif_offenders"] = est.vif->offenders;
    }
    if (est.hausman_report) d["hausman"] = report_to_json(*est.hausman_report);
    return d;
}

int cmd_ingest(const CommonArgs& a) {
    auto schema = load_schema(a.schema);
    PanelDataset ds = ingest_csv_file(a.input, schema, parse_frequency(a.freq));
    std::ostringstream csv;
    write_csv(ds, csv);
    nlohmann::json summary = {{"countries", ds.countries()},
                              {"periods", ds.n_periods()},
                              {"first", ds.time_index().front().label()},
                              {"last", ds.time_index().back().label()},
                              {"variables", ds.variable_names()}};
    ArtifactWriter w(a.out);
    w.add("panel.csv", csv.str());
    w.add("ingest_summary.json", summary.dump(2) + "\n");
    w.commit("ingest", cli_config_json(a, "ingest"), 0, {{"input", a.input}, {"schema", a.schema}});
    std::cout << "ingested " << ds.n_countries() << " countries x " << ds.n_periods()
              << " periods, " << ds.variable_names().size() << " variables\n";
    return 0;
}

int cmd_estimate(const CommonArgs& a, bool diagnostics_only) {
    Frequency freq = parse_frequency(a.freq);
    auto schema = load_schema(a.schema);
    PanelDataset ds = ingest_csv_file(a.input, schema, freq);
    EstimateSpec spec = load_estimate_spec(a.spec, freq);
    pipeline::EstimateOutput est = pipeline::run_estimate(ds, spec);

    ArtifactWriter w(a.out);
    w.add("diagnostics.json", diagnostics_to_json(est).dump(2) + "\n");
    if (!diagnostics_only) {
        w.add("fit.json", serialize_fit(est.fit));
        add_tables(w, est.table, a.format);
    }
    const char* command = diagnostics_only ? "diagnose" : "estimate";
    w.commit(command, cli_config_json(a, command), 0,
             {{"input", a.input}, {"schema", a.schema}, {"spec", a.spec}});
    if (!est.fit.converged) {
        std::cout << "NoConvergence\n";
        std::cerr << "estimation stopped at max_iter without meeting the tolerance\n";
        return 4;
    }
    std::cout << (diagnostics_only ? "diagnostics" : "estimate") << " written to " << a.out << "\n";
    return 0;
}

int cmd_models(const CommonArgs& a) {
    auto schema = load_schema(a.schema);
    PanelDataset ds = ingest_csv_file(a.input, schema, Frequency::Yearly);
    pipeline::ModelsOutput models = pipeline::run_models(ds);

    ArtifactWriter w(a.out);
    w.add("models.json", models.to_json().dump(2) + "\n");
    if (models.growth_model) w.add("growth_model.json", serialize_model(*models.growth_model));
    add_tables(w, models.aic_table, a.format);
    if (models.t4) add_tables(w, *models.t4, a.format);
    w.commit("models", cli_config_json(a, "models"), 0,
             {{"input", a.input}, {"schema", a.schema}});
    std::cout << "models written to " << a.out << "\n";
    return 0;
}

int cmd_forecast(const CommonArgs& a) {
    auto schema = load_schema(a.schema);
    PanelDataset ds = ingest_csv_file(a.input, schema, Frequency::Yearly);
    TargetConfig cfg = a.targets.empty() ? TargetConfig::builtin() : TargetConfig::load(a.targets);
    pipeline::ModelsOutput models = pipeline::run_models(ds);
    pipeline::ForecastOutput fc = pipeline::run_forecast(models, cfg, a.n_paths, a.seed, a.workers);

    ArtifactWriter w(a.out);
    w.add("forecast_quantiles.json", fc.quantile_json.dump(2) + "\n");
    if (fc.t3) add_tables(w, *fc.t3, a.format);
    if (fc.t6) add_tables(w, *fc.t6, a.format);
    if (fc.t7) add_tables(w, *fc.t7, a.format);
    if (a.terminals) {
        for (const auto& [var, by_year] : fc.ensembles)
            for (const auto& [year, ens] : by_year) {
                std::vector<const TrajectoryEnsemble*> ptrs;
                for (const auto& [_, e] : ens) ptrs.push_back(&e);
                std::ostringstream csv;
                write_terminal_csv(csv, ptrs);
                w.add("terminal_" + var + "_" + std::to_string(year) + ".csv", csv.str());
            }
    }
    std::map<std::string, std::string> inputs{{"input", a.input}, {"schema", a.schema}};
    if (!a.targets.empty()) inputs["targets"] = a.targets;
    w.commit("forecast", cli_config_json(a, "forecast"), a.seed, inputs);
    std::cout << "forecast written to " << a.out << "\n";
    return 0;
}

int cmd_scenario(const CommonArgs& a, const std::vector<std::string>& names) {
    auto schema = load_schema(a.schema);
    PanelDataset ds = ingest_csv_file(a.input, schema, Frequency::Yearly);
    TargetConfig cfg = a.targets.empty() ? TargetConfig::builtin() : TargetConfig::load(a.targets);
    pipeline::ModelsOutput models = pipeline::run_models(ds);
    if (!models.growth_model)
        throw Error::input("UnknownVariable", "scenario simulation needs GHG, CONSM and RES");

    std::vector<Scenario> scen;
    for (const auto& n : names) {
        if (n == "A" || n == "B" || n == "C")
            scen.push_back(builtin_scenario(n, models.growth_table ? &*models.growth_table : nullptr));
        else
            scen.push_back(parse_scenario(load_json_file(n)));
    }
    pipeline::ScenarioOutput sc =
        pipeline::run_scenarios(*models.growth_model, scen, cfg, a.n_paths, a.seed, a.workers);

    ArtifactWriter w(a.out);
    w.add("growth_model.json", serialize_model(*models.growth_model));
    w.add("scenario_quantiles.json", sc.quantile_json.dump(2) + "\n");
    add_tables(w, sc.t5, a.format);
    if (a.terminals) {
        for (const auto& panel : sc.panels) {
            std::vector<const TrajectoryEnsemble*> ptrs;
            for (const auto& [_, e] : panel.e2030) ptrs.push_back(&e);
            std::ostringstream csv;
            write_terminal_csv(csv, ptrs);
            w.add("terminal_GHG_panel" + panel.name + "_2030.csv", csv.str());
        }
    }
    std::map<std::string, std::string> inputs{{"input", a.input}, {"schema", a.schema}};
    if (!a.targets.empty()) inputs["targets"] = a.targets;
    w.commit("scenario", cli_config_json(a, "scenario"), a.seed, inputs);
    std::cout << "scenario tables written to " << a.out << "\n";
    return 0;
}

int cmd_report(const std::string& config_path, const CommonArgs& a) {
    RunConfig cfg = parse_run_config(load_json_file(config_path));
    if (a.seed_set) {
        cfg.master_seed = a.seed;
        cfg.seed_set = true;
    }
    if (a.n_paths > 0) cfg.n_paths = a.n_paths;
    if (!a.format.empty()) cfg.format = a.format;
    if (!a.targets.empty()) cfg.targets = a.targets;
    if (a.workers > 0) cfg.n_workers = a.workers;
    pipeline::run_report(cfg, a.out);
    std::cout << "report written to " << a.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cepkit: panel electricity-price regressions and CEP target simulations"};
    app.require_subcommand(1);

    CommonArgs args;
    std::vector<std::string> scenario_names;
    std::string report_config;

    auto add_io = [&](CLI::App* cmd, bool with_schema = true) {
        cmd->add_option("--input", args.input, "Long-format CSV input")->required();
        if (with_schema) cmd->add_option("--schema", args.schema, "Schema file")->required();
        cmd->add_option("--out", args.out, "Output directory");
        cmd->add_option("--format", args.format, "table, csv or both");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a panel CSV");
    add_io(ingest);
    ingest->add_option("--freq", args.freq, "monthly, biannual or yearly");

    auto* estimate = app.add_subcommand("estimate", "Fit a panel regression and emit its table");
    add_io(estimate);
    estimate->add_option("--freq", args.freq, "monthly, biannual or yearly");
    estimate->add_option("--spec", args.spec, "Estimate spec JSON")->required();

    auto* diagnose = app.add_subcommand("diagnose", "Run regression diagnostics only");
    add_io(diagnose);
    diagnose->add_option("--freq", args.freq, "monthly, biannual or yearly");
    diagnose->add_option("--spec", args.spec, "Estimate spec JSON")->required();

    auto* models = app.add_subcommand("models", "Fit yearly forecast models and compare AIC");
    add_io(models);

    auto* forecast = app.add_subcommand("forecast", "Simulate fitted models against CEP targets");
    add_io(forecast);
    forecast->add_option("--paths", args.n_paths, "Number of Monte Carlo paths");
    add_seed_option(forecast, args);
    forecast->add_option("--targets", args.targets, "Target config JSON (default: built-in table)");
    forecast->add_option("--workers", args.workers, "Worker threads (result is worker-invariant)");
    forecast->add_flag("--terminals", args.terminals, "Also dump terminal values per path");

    auto* scenario = app.add_subcommand("scenario", "Simulate the growth model under scenarios");
    add_io(scenario);
    scenario->add_option("--paths", args.n_paths, "Number of Monte Carlo paths");
    add_seed_option(scenario, args);
    scenario->add_option("--name", scenario_names, "Scenario name (A, B, C) or JSON file")
        ->required();
    scenario->add_option("--targets", args.targets, "Target config JSON");
    scenario->add_option("--workers", args.workers, "Worker threads");
    scenario->add_flag("--terminals", args.terminals, "Also dump terminal values per path");

    auto* report = app.add_subcommand("report", "Run the full pipeline from a run config");
    report->add_option("--config", report_config, "Run config JSON")->required();
    report->add_option("--out", args.out, "Output directory");
    report->add_option("--seed", args.seed, "Master seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    report->add_option("--paths", args.n_paths, "Paths override");
    report->add_option("--format", args.format, "table, csv or both");
    report->add_option("--targets", args.targets, "Target config override");
    report->add_option("--workers", args.workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ingest) return cmd_ingest(args);
        if (*estimate) return cmd_estimate(args, false);
        if (*diagnose) return cmd_estimate(args, true);
        if (*models) return cmd_models(args);
        if (*forecast) return cmd_forecast(args);
        if (*scenario) return cmd_scenario(args, scenario_names);
        if (*report) return cmd_report(report_config, args);
    } catch (const cepkit::Error& e) {
        std::cout << e.error_class() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cout << "InternalError\n";
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
