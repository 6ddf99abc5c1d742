// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "cepkit/diagnostics.hpp"
#include "cepkit/pipeline.hpp"
#include "cepkit/regression.hpp"
#include "cepkit/stats.hpp"
#include "helpers.hpp"

using namespace cepkit;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------- criterion 1

Check target_arithmetic() {
    Check c;
    double t0 = now_seconds();
    TargetConfig cfg = TargetConfig::builtin();

    const std::vector<std::string> countries{"AU", "DK", "FI", "FR", "GE", "GR", "IT", "PT", "SE", "SP"};
    const double printed_2020[] = {63760, 57683, 57846, 444617, 1010391, 84462, 419292, 48906, 583924, 234760};
    const double printed_2030[] = {47820, 43263, 43384, 333463, 757793, 63346, 314469, 36680, 437943, 176070};
    for (std::size_t i = 0; i < countries.size(); ++i) {
        double base = cfg.at(countries[i]).ghg_1990;
        // published cells round hidden-decimal bases; agreement is at
        // integer resolution (within one unit)
        c.require(std::abs(ghg_target(base, Horizon::Y2020) - printed_2020[i]) <= 1.0,
                  countries[i] + " 2020 GHG target");
        c.require(std::abs(ghg_target(base, Horizon::Y2030) - printed_2030[i]) <= 1.0,
                  countries[i] + " 2030 GHG target");
    }
    c.require(ghg_target(79700.0, Horizon::Y2020) == 63760.0, "AU 2020 exact");
    c.require(ghg_target(79700.0, Horizon::Y2030) == 47820.0, "AU 2030 exact");

    auto a20 = consumption_projection_and_target(cfg.at("AU").gic_2010, Horizon::Y2020);
    auto a30 = consumption_projection_and_target(cfg.at("AU").gic_2010, Horizon::Y2030);
    c.require(std::abs(a20.projection - 79293.0) <= 1e-4 * 79293.0, "AU 2020 projection");
    c.require(std::abs(a20.target - 63434.0) <= 1e-4 * 63434.0, "AU 2020 consumption target");
    c.require(std::abs(a30.projection - 85870.0) <= 1e-4 * 85870.0, "AU 2030 projection");
    c.require(std::abs(a30.target - 62685.0) <= 1e-4 * 62685.0, "AU 2030 consumption target");

    const double res_2020[] = {0.34, 0.30, 0.38, 0.23, 0.18, 0.18, 0.17, 0.31, 0.49, 0.20};
    const double res_2030[] = {0.34, 0.30, 0.38, 0.27, 0.27, 0.27, 0.27, 0.31, 0.49, 0.27};
    for (std::size_t i = 0; i < countries.size(); ++i) {
        c.require(res_target(cfg, countries[i], Horizon::Y2020) == res_2020[i],
                  countries[i] + " 2020 RES target");
        c.require(res_target(cfg, countries[i], Horizon::Y2030) == res_2030[i],
                  countries[i] + " 2030 RES target");
    }

    c.require(now_seconds() - t0 < 1.0, "runtime under 1 s");
    return c;
}

// ---------------------------------------------------------------- criterion 2

TrajectoryEnsemble make_trend_ensemble(const std::string& country, double mean, double sd,
                                       std::uint64_t seed, int n = 100000) {
    TrendModel m;
    m.beta0 = mean;
    m.beta1 = 0.0;
    m.sigma = sd;
    m.t0_year = 2016;
    m.last_obs = {2016, mean};
    SimOptions o;
    o.n_paths = n;
    o.master_seed = seed;
    o.country = country;
    o.variable = "GHG";
    return simulate(m, 2020, o);
}

Check compliance_verdicts() {
    Check c;
    TargetConfig cfg = TargetConfig::builtin();
    EnsembleByCountry e2020, e2030;
    // AU shaped like the published failing case: Q(1%) above the target
    e2020.emplace("AU", make_trend_ensemble("AU", 70739.0, 1000.0, 1));
    e2030.emplace("AU", make_trend_ensemble("AU", 60744.0, 1000.0, 2));
    // DK comfortably passing
    e2020.emplace("DK", make_trend_ensemble("DK", 37049.0, 1000.0, 3));
    e2030.emplace("DK", make_trend_ensemble("DK", 15604.0, 1000.0, 4));

    double au_target = ghg_target(cfg.at("AU").ghg_1990, Horizon::Y2020);
    auto q = quantiles(e2020.at("AU"), {0.01});
    c.require(q.at(0.01) > au_target, "constructed Q(1%) above target");
    c.require(compliance_probability(e2020.at("AU"), au_target, Direction::AtMost) < 0.01,
              "compliance below 1%");

    Table t3 = build_t3(cfg, e2020, e2030);
    auto marked = [&](const std::string& row, std::size_t col) {
        for (const auto& r : t3.rows)
            if (r.label == row) return r.cells[col].marked;
        return false;
    };
    c.require(marked("Q(1%,2020)", 0), "AU 2020 cell marked");
    c.require(marked("Q(1%,2030)", 0), "AU 2030 cell marked");
    c.require(!marked("Q(1%,2020)", 1), "DK 2020 cell unmarked");
    c.require(!marked("Q(1%,2030)", 1), "DK 2030 cell unmarked");
    return c;
}

// ---------------------------------------------------------------- criterion 3

Check montecarlo_oracles() {
    Check c;
    double t0 = now_seconds();
    const int n = 100000;
    const double z01 = 2.326;
    for (int k = 0; k < 20; ++k) {
        double mu0 = 200.0 * rng::uniform(778, 0, k, 0) - 100.0;
        double slope = 4.0 * rng::uniform(778, 1, k, 0) - 2.0;
        double sd = 0.5 + 5.0 * rng::uniform(778, 2, k, 0);
        int horizon = 2017 + static_cast<int>(13.0 * rng::uniform(778, 3, k, 0));
        TrendModel m;
        m.beta0 = mu0;
        m.beta1 = slope;
        m.sigma = sd;
        m.t0_year = 2008;
        m.last_obs = {2016, mu0 + slope * 8};
        SimOptions o;
        o.n_paths = n;
        o.master_seed = 31337 + static_cast<std::uint64_t>(k);
        o.country = "P" + std::to_string(k);
        o.variable = "VAR";
        auto e = simulate(m, horizon, o);
        double mu_h = mu0 + slope * (horizon - 2008);
        double expect = mu_h - z01 * sd;
        double q01 = quantiles(e, {0.01}).at(0.01);
        double se = std::sqrt(0.01 * 0.99 / n) / (norm_pdf(-2.326347874) / sd);
        c.require(std::abs(q01 - expect) <= 3.0 * se,
                  "trend Q(1%) parameterization " + std::to_string(k));
    }

    for (int k = 0; k < 4; ++k) {
        Ar2Model m;
        m.mu = 0.5 + k;
        m.rho1 = 0.3 + 0.1 * k;
        m.rho2 = 0.25 - 0.1 * k;
        m.sigma = 0.8 + 0.3 * k;
        m.last_two_obs = {std::pair{2015, 1.0}, std::pair{2016, 1.5}};
        SimOptions o;
        o.n_paths = 40000;
        o.master_seed = 4242 + static_cast<std::uint64_t>(k);
        o.country = "A" + std::to_string(k);
        o.variable = "VAR";
        auto e = simulate(m, 2016 + 150, o);
        Eigen::VectorXd terminal = e.terminal();
        double mean = terminal.mean();
        double var = (terminal.array() - mean).square().sum() / (terminal.size() - 1);
        double s2 = m.sigma * m.sigma;
        double analytic =
            s2 * (1 - m.rho2) / ((1 + m.rho2) * ((1 - m.rho2) * (1 - m.rho2) - m.rho1 * m.rho1));
        c.require(std::abs(var - analytic) <= 0.05 * analytic,
                  "AR(2) long-run variance parameterization " + std::to_string(k));
    }
    double dt = now_seconds() - t0;
    c.require(dt < 30.0, "runtime under 30 s (got " + std::to_string(dt) + ")");
    return c;
}

// ---------------------------------------------------------------- criterion 4

PanelDgp paper_shape_dgp(int J, int T, Frequency freq) {
    PanelDgp dgp;
    dgp.countries = testutil::codes(J);
    dgp.start = Period{freq, 2008, 1};
    dgp.n_periods = T;
    dgp.regressors.push_back(
        {.name = "RES", .dist = DgpRegressor::Dist::Uniform, .lo = 0.05, .hi = 0.9});
    Eigen::VectorXd slopes(J);
    for (int j = 0; j < J; ++j) slopes(j) = -16.0 - 3.5 * j;  // paper-sized merit-order effects
    dgp.slopes["RES"] = slopes;
    dgp.country_effects = Eigen::VectorXd::LinSpaced(J, 38.0, 60.0);
    dgp.sigma = testutil::equicorrelated(J, 4.0, 0.3);
    dgp.ar = {{1, 0.5}};
    return dgp;
}

Check estimator_recovery() {
    Check c;
    double t0 = now_seconds();

    // monthly shape: iterated FGLS-SUR with AR(1) errors and PCSE
    {
        auto dgp = paper_shape_dgp(10, 108, Frequency::Monthly);
        dgp.seasonal_effects = Eigen::VectorXd::LinSpaced(12, -2.0, 2.0);
        ModelSpec spec;
        spec.dependent = "Y";
        spec.regressors.emplace_back("RES", SlopeScope::PerCountry);
        spec.country_effects = true;
        spec.seasonal_effects = true;
        spec.weighting = Weighting::CrossSectionSUR;
        spec.covariance = CovarianceType::PCSE;
        spec.arma.ar = {1};
        int within = 0, total = 0;
        for (int rep = 0; rep < 200; ++rep) {
            auto synth = synthesize_dataset(dgp, 70000 + static_cast<std::uint64_t>(rep));
            FitResult fit = fit_panel(synth.dataset, spec);
            for (int j = 0; j < 10; ++j) {
                const auto& country = dgp.countries[static_cast<std::size_t>(j)];
                ++total;
                if (std::abs(fit.coefficient("RES", country) - dgp.slopes["RES"](j)) <=
                    3.0 * fit.std_error("RES", country))
                    ++within;
            }
        }
        double rate = static_cast<double>(within) / total;
        c.require(rate >= 0.95, "monthly-shape 3-SE recovery (got " + std::to_string(rate) + ")");
    }

    // biannual shape: two-step FGLS with AR(1). With T barely above J the
    // asymptotic standard errors of any full-covariance weighting are
    // known to understate the sampling spread, so recovery is judged
    // against the replication (Monte Carlo) standard error.
    {
        auto dgp = paper_shape_dgp(10, 18, Frequency::Biannual);
        ModelSpec spec;
        spec.dependent = "Y";
        spec.regressors.emplace_back("RES", SlopeScope::PerCountry);
        spec.country_effects = true;
        spec.weighting = Weighting::CrossSectionSUR;
        spec.covariance = CovarianceType::PCSE;
        spec.arma.ar = {1};
        FitOptions two_step;
        two_step.two_step = true;
        const int reps = 200;
        Eigen::MatrixXd est(reps, 10);
        for (int rep = 0; rep < reps; ++rep) {
            auto synth = synthesize_dataset(dgp, 80000 + static_cast<std::uint64_t>(rep));
            FitResult fit = fit_panel(synth.dataset, spec, two_step);
            for (int j = 0; j < 10; ++j)
                est(rep, j) = fit.coefficient("RES", dgp.countries[static_cast<std::size_t>(j)]);
        }
        int within = 0;
        for (int j = 0; j < 10; ++j) {
            double mean = est.col(j).mean();
            double sd = std::sqrt((est.col(j).array() - mean).square().sum() / (reps - 1));
            for (int rep = 0; rep < reps; ++rep)
                if (std::abs(est(rep, j) - dgp.slopes["RES"](j)) <= 3.0 * sd) ++within;
        }
        double rate = static_cast<double>(within) / (reps * 10.0);
        c.require(rate >= 0.95, "biannual-shape 3-SE recovery (got " + std::to_string(rate) + ")");
    }

    // OLS stage: 95% confidence-interval coverage
    {
        auto dgp = paper_shape_dgp(10, 108, Frequency::Monthly);
        dgp.ar.clear();
        ModelSpec spec;
        spec.dependent = "Y";
        spec.regressors.emplace_back("RES", SlopeScope::PerCountry);
        spec.country_effects = true;
        int covered = 0;
        const int reps = 500;
        for (int rep = 0; rep < reps; ++rep) {
            auto synth = synthesize_dataset(dgp, 90000 + static_cast<std::uint64_t>(rep));
            FitResult fit = fit_ols(synth.dataset, spec);
            double err = fit.coefficient("RES", "C0") - dgp.slopes["RES"](0);
            if (std::abs(err) <= 1.959964 * fit.std_error("RES", "C0")) ++covered;
        }
        double rate = static_cast<double>(covered) / reps;
        c.require(rate >= 0.925 && rate <= 0.975,
                  "OLS coverage (got " + std::to_string(rate) + ")");
    }

    double dt = now_seconds() - t0;
    c.require(dt < 300.0, "runtime under 5 min (got " + std::to_string(dt) + ")");
    return c;
}

// ---------------------------------------------------------------- criterion 5

Check diagnostics_calibration() {
    Check c;

    {  // Wald p-values uniform under the null
        auto dgp = testutil::basic_dgp(10, 100);
        dgp.slopes["X"] = Eigen::VectorXd::Constant(10, 1.0);
        ModelSpec spec;
        spec.dependent = "Y";
        spec.regressors.emplace_back("X", SlopeScope::PerCountry);
        spec.country_effects = true;
        std::vector<double> pvals;
        for (int rep = 0; rep < 1000; ++rep) {
            auto synth = synthesize_dataset(dgp, 100000 + static_cast<std::uint64_t>(rep));
            pvals.push_back(wald_slope_equality(fit_ols(synth.dataset, spec), "X").p_value);
        }
        double ks = testutil::ks_uniform(pvals);
        c.require(ks < 0.05, "Wald null KS distance (got " + std::to_string(ks) + ")");
    }

    {  // Hausman size at nominal 5%
        const int J = 15, T = 100;
        auto dgp = testutil::basic_dgp(J, T);
        dgp.slopes["X"] = Eigen::VectorXd::Constant(1, 1.0);
        dgp.country_effects = Eigen::VectorXd::LinSpaced(J, -3.0, 3.0);
        ModelSpec pooled;
        pooled.dependent = "Y";
        pooled.regressors.emplace_back("X", SlopeScope::Pooled);
        ModelSpec fe_spec = pooled;
        fe_spec.country_effects = true;
        int rejected = 0;
        const int reps = 500;
        for (int rep = 0; rep < reps; ++rep) {
            auto synth = synthesize_dataset(dgp, 110000 + static_cast<std::uint64_t>(rep));
            FitResult fe = fit_ols(synth.dataset, fe_spec);
            FitResult re = fit_random_effects(synth.dataset, pooled);
            if (hausman(fe, re).p_value < 0.05) ++rejected;
        }
        double size = static_cast<double>(rejected) / reps;
        c.require(size >= 0.02 && size <= 0.09, "Hausman size (got " + std::to_string(size) + ")");
    }

    {  // Durbin-Watson on long white noise
        Eigen::MatrixXd wn(10000, 1);
        for (int t = 0; t < 10000; ++t) wn(t, 0) = rng::gauss(55, 0, 0, t);
        double dw = durbin_watson(wn);
        c.require(std::abs(dw - 2.0) <= 0.05, "white-noise DW (got " + std::to_string(dw) + ")");
    }

    {  // VIF on exactly orthogonal regressors
        const int T = 64;
        PanelDataset ds(std::vector<std::string>{"AT"},
                        period_range(Period{Frequency::Monthly, 2008, 1}, T));
        Eigen::MatrixXd a(T, 1), b(T, 1);
        for (int t = 0; t < T; ++t) {
            a(t, 0) = (t % 2 == 0) ? 1.0 : -1.0;
            b(t, 0) = (t % 4 < 2) ? 1.0 : -1.0;
        }
        ds = ds.with_variable("A", "u", a);
        ds = ds.with_variable("B", "u", b);
        auto v = vif(ds, {"A", "B"});
        c.require(std::abs(v.values.at("A") - 1.0) <= 1e-12 &&
                      std::abs(v.values.at("B") - 1.0) <= 1e-12,
                  "orthogonal VIF == 1");
    }
    return c;
}

// ---------------------------------------------------------------- criterion 6

Check model_selection() {
    Check c;
    const int reps = 200, n = 50;
    int trend_wins = 0, ar_wins = 0;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> tr, ar{0.0, 0.0};
        for (int t = 0; t < n; ++t)
            tr.push_back(10.0 + 1.0 * t + 1.5 * rng::gauss(120000, 0, rep, t));
        for (int t = 2; t < n; ++t)
            ar.push_back(0.9 * ar[static_cast<std::size_t>(t - 1)] -
                         0.25 * ar[static_cast<std::size_t>(t - 2)] + rng::gauss(120001, 0, rep, t));
        auto ts = testutil::series_of(1970, tr);
        auto as = testutil::series_of(1970, ar);
        ModelSelection st = select_model({fit_trend(ts), fit_ar2(ts)});
        ModelSelection sa = select_model({fit_trend(as), fit_ar2(as)});
        if (st.table[st.chosen].name == "trend") ++trend_wins;
        if (sa.table[sa.chosen].name == "ar2") ++ar_wins;
    }
    c.require(trend_wins >= 180, "trend recovery (got " + std::to_string(trend_wins) + "/200)");
    c.require(ar_wins >= 180, "AR(2) recovery (got " + std::to_string(ar_wins) + "/200)");

    // uncensored RES shares: censored likelihood collapses to the trend one
    std::vector<double> vals;
    for (int t = 0; t < 12; ++t)
        vals.push_back(0.4 + 0.01 * t + 0.03 * rng::gauss(120002, 0, 0, t));
    auto series = testutil::series_of(2005, vals);
    TrendModel trend = fit_trend(series);
    TobitModel tobit = fit_tobit(series);
    c.require(tobit.n_censored == 0, "series is interior");
    c.require(std::abs(tobit.loglik - trend.loglik) < 1e-8,
              "tobit loglik equals trend loglik (diff " +
                  std::to_string(std::abs(tobit.loglik - trend.loglik)) + ")");
    return c;
}

// ---------------------------------------------------------------- criterion 7

Check determinism() {
    Check c;
    fs::path demo = fs::path(CEPKIT_DEMO_DIR);
    fs::path base = fs::temp_directory_path() / "cepkit_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    auto run = [&](const std::string& out) {
        std::string cmd = "cd " + demo.string() + " && " + std::string(CEPKIT_CLI_PATH) +
                          " report --config run_demo.json --paths 2000 --out " + out +
                          " >/dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    c.require(run((base / "a").string()), "first pipeline run succeeds");
    c.require(run((base / "b").string()), "second pipeline run succeeds");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    int files = 0;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        ++files;
        fs::path twin = base / "b" / entry.path().filename();
        c.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                  "byte-identical artifact " + entry.path().filename().string());
    }
    c.require(files >= 15, "pipeline produced its artifacts");

    // worker-count invariance of the ensembles
    TrendModel m;
    m.beta0 = 50.0;
    m.beta1 = 1.0;
    m.sigma = 2.0;
    m.t0_year = 2008;
    m.last_obs = {2016, 58.0};
    PooledGrowthModel g;
    g.by_country["AU"] = {-0.02, 0.5, -0.1, 0.01};
    g.start_levels["AU"] = {900.0, 2016};
    Scenario sc;
    sc.name = "B";
    sc.growth["CONSM"][""] = -0.02;
    sc.growth["RES"][""] = 0.02;
    for (int workers : {4, 8}) {
        SimOptions o1;
        o1.n_paths = 20001;
        o1.master_seed = 9;
        o1.country = "AU";
        o1.variable = "GHG";
        SimOptions ow = o1;
        ow.n_workers = workers;
        auto a = simulate(m, 2030, o1);
        auto b = simulate(m, 2030, ow);
        c.require(a.paths == b.paths, "trend ensemble identical under " + std::to_string(workers) + " workers");
        auto ga = simulate_growth(g, sc, 2030, 20001, 9, 1);
        auto gb = simulate_growth(g, sc, 2030, 20001, 9, workers);
        c.require(ga.at("AU").paths == gb.at("AU").paths,
                  "growth ensemble identical under " + std::to_string(workers) + " workers");
    }
    return c;
}

// ---------------------------------------------------------------- criterion 8

Check scenario_ordering() {
    Check c;
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 40 && checked < 20; ++seed) {
        // synthetic yearly panel with a genuinely negative RES effect
        const int J = 3, T = 20;
        const double b0 = -0.01 - 0.001 * static_cast<double>(seed % 5);
        const double b1 = 0.4 + 0.02 * static_cast<double>(seed % 7);
        const double b2 = -0.25 - 0.01 * static_cast<double>(seed % 3);
        PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Yearly, 1997, 1}, T));
        Eigen::MatrixXd ghg(T, J), consm(T, J), res(T, J);
        for (int j = 0; j < J; ++j) {
            double g = 900.0 + 50.0 * j, v = 400.0, r = 0.3;
            for (int t = 0; t < T; ++t) {
                ghg(t, j) = g;
                consm(t, j) = v;
                res(t, j) = std::clamp(r, 0.01, 0.99);
                double dc = 0.03 * rng::gauss(130000 + seed, 1, j, t);
                double dr = 0.08 * rng::gauss(130000 + seed, 2, j, t);
                double dg = b0 + b1 * dc + b2 * dr + 0.01 * rng::gauss(130000 + seed, 3, j, t);
                v *= std::exp(dc);
                r = std::clamp(r * std::exp(dr), 0.01, 0.99);
                g *= std::exp(dg);
            }
        }
        PanelDataset full = ds.with_variable("GHG", "kt", ghg)
                                .with_variable("CONSM", "GWh", consm)
                                .with_variable("RES", "fraction", res);
        FitResult fit = fit_pooled_growth(full);
        PooledGrowthModel model = make_growth_model(fit, full);
        bool all_negative = true;
        for (const auto& [_, cg] : model.by_country) all_negative &= cg.beta2 < 0.0;
        if (!all_negative) continue;  // the criterion conditions on fitted beta2 < 0
        ++checked;

        Scenario b;
        b.name = "B";
        b.growth["CONSM"][""] = -0.02;
        b.growth["RES"][""] = 0.02;
        Scenario cc = b;
        cc.name = "C";
        cc.growth["RES"][""] = 0.06;
        std::uint64_t sim_seed = 500 + seed;
        auto eb = simulate_growth(model, b, 2030, 5000, sim_seed);
        auto ec = simulate_growth(model, cc, 2030, 5000, sim_seed);
        for (const auto& [country, e] : eb) {
            double med_b = quantiles(e, {0.5}).at(0.5);
            double med_c = quantiles(ec.at(country), {0.5}).at(0.5);
            c.require(med_c <= med_b, "fit " + std::to_string(checked) + " " + country +
                                          " panel C median above panel B");
        }
    }
    c.require(checked == 20, "found 20 fits with negative RES effect (got " + std::to_string(checked) + ")");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 target arithmetic matches the published tables", target_arithmetic},
        {"2 compliance verdict marks sub-1% countries", compliance_verdicts},
        {"3 Monte Carlo quantiles match analytic oracles", montecarlo_oracles},
        {"4 estimators recover the truth at paper scale", estimator_recovery},
        {"5 diagnostics are calibrated", diagnostics_calibration},
        {"6 model selection picks the generating model", model_selection},
        {"7 pipeline runs are deterministic", determinism},
        {"8 scenario panels order as their drifts imply", scenario_ordering},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        double t0 = now_seconds();
        Check result = criterion.run();
        double dt = now_seconds() - t0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1fs", dt);
        if (result.ok) {
            std::cout << "PASS criterion " << criterion.label << " [" << buf << "]\n";
        } else {
            ++failures;
            std::cout << "FAIL criterion " << criterion.label << " [" << buf
                      << "]: " << result.detail.str() << "\n";
        }
        std::cout.flush();
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures ? 1 : 0;
}
