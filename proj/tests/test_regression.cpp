#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "cepkit/errors.hpp"
#include "cepkit/regression.hpp"
#include "helpers.hpp"

using namespace cepkit;

namespace {

ModelSpec per_country_spec(const std::vector<std::string>& regressors, bool fe = true) {
    ModelSpec spec;
    spec.dependent = "Y";
    for (const auto& r : regressors) spec.regressors.emplace_back(r, SlopeScope::PerCountry);
    spec.country_effects = fe;
    return spec;
}

/// Panel whose regressor takes identical values in every country; with
/// per-country slopes and intercepts, every equation then has the same
/// design matrix and SUR weighting cannot move the estimates.
PanelDataset common_regressor_panel(int J, int T, std::uint64_t seed, double noise) {
    PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Monthly, 2010, 1}, T));
    Eigen::MatrixXd x(T, J), y(T, J);
    for (int t = 0; t < T; ++t) {
        double xt = rng::gauss(seed, 0, 0, t);
        for (int j = 0; j < J; ++j) {
            x(t, j) = xt;
            y(t, j) = 0.5 * j + (1.0 + 0.3 * j) * xt + noise * rng::gauss(seed, 1, j, t);
        }
    }
    ds = ds.with_variable("X", "u", x);
    ds = ds.with_variable("Y", "u", y);
    return ds;
}

}  // namespace

TEST_CASE("ols: noiseless intercept and slope recovered exactly") {
    PanelDataset ds(std::vector<std::string>{"AT"}, period_range(Period{Frequency::Yearly, 2000, 1}, 20));
    Eigen::MatrixXd x(20, 1), y(20, 1);
    for (int t = 0; t < 20; ++t) {
        x(t, 0) = 0.3 * t - 2.0;
        y(t, 0) = 2.0 + 3.0 * x(t, 0);
    }
    ds = ds.with_variable("X", "u", x);
    ds = ds.with_variable("Y", "u", y);
    FitResult fit = fit_ols(ds, per_country_spec({"X"}));
    CHECK(std::abs(fit.coefficient("const") - 2.0) < 1e-9);
    CHECK(std::abs(fit.coefficient("X", "AT") - 3.0) < 1e-9);
    CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("ols: per-country scope separates slopes") {
    PanelDataset ds(std::vector<std::string>{"C1", "C2"},
                    period_range(Period{Frequency::Yearly, 2000, 1}, 15));
    Eigen::MatrixXd x(15, 2), y(15, 2);
    for (int t = 0; t < 15; ++t)
        for (int j = 0; j < 2; ++j) {
            x(t, j) = std::sin(0.7 * t + j);
            y(t, j) = (j + 1.0) * x(t, j);
        }
    ds = ds.with_variable("X", "u", x);
    ds = ds.with_variable("Y", "u", y);
    FitResult fit = fit_ols(ds, per_country_spec({"X"}, false));
    CHECK(std::abs(fit.coefficient("X", "C1") - 1.0) < 1e-10);
    CHECK(std::abs(fit.coefficient("X", "C2") - 2.0) < 1e-10);
}

TEST_CASE("ols: 95% confidence intervals cover the truth") {
    auto dgp = testutil::basic_dgp(10, 108);
    dgp.sigma = Eigen::MatrixXd::Identity(10, 10) * 4.0;
    int covered = 0;
    const int reps = 500;
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 1000 + static_cast<std::uint64_t>(rep));
        FitResult fit = fit_ols(synth.dataset, per_country_spec({"X"}));
        double err = fit.coefficient("X", "C0") - dgp.slopes["X"](0);
        if (std::abs(err) <= 1.959964 * fit.std_error("X", "C0")) ++covered;
    }
    double rate = static_cast<double>(covered) / reps;
    CHECK(rate >= 0.925);
    CHECK(rate <= 0.975);
}

TEST_CASE("ols: residual mean is zero per country when effects are included") {
    auto dgp = testutil::basic_dgp(6, 50);
    auto synth = synthesize_dataset(dgp, 17);
    FitResult fit = fit_ols(synth.dataset, per_country_spec({"X"}));
    for (int j = 0; j < 6; ++j) {
        double m = fit.residuals.col(j).mean();
        double sd = std::sqrt(fit.residuals.col(j).squaredNorm() / fit.residuals.rows());
        CHECK(std::abs(m) < 1e-8 * sd);
    }
}

TEST_CASE("ols: adding a regressor never lowers unadjusted R2") {
    auto dgp = testutil::basic_dgp(4, 60);
    dgp.regressors.push_back({.name = "Z"});
    dgp.slopes["Z"] = Eigen::VectorXd::Constant(1, 0.0);  // irrelevant variable
    auto synth = synthesize_dataset(dgp, 23);
    FitResult small = fit_ols(synth.dataset, per_country_spec({"X"}));
    ModelSpec bigger = per_country_spec({"X"});
    bigger.regressors.emplace_back("Z", SlopeScope::Pooled);
    FitResult big = fit_ols(synth.dataset, bigger);
    CHECK(big.r2 >= small.r2 - 1e-12);
}

TEST_CASE("ols: rescaling a regressor rescales its coefficient and nothing else") {
    auto dgp = testutil::basic_dgp(3, 40);
    auto synth = synthesize_dataset(dgp, 29);
    FitResult base = fit_ols(synth.dataset, per_country_spec({"X"}));

    const double c = 100.0;
    PanelDataset scaled = synth.dataset.with_variable("X", "u", synth.dataset.values("X") * c);
    FitResult fit = fit_ols(scaled, per_country_spec({"X"}));
    for (const auto& country : synth.dataset.countries())
        CHECK(std::abs(fit.coefficient("X", country) - base.coefficient("X", country) / c) < 1e-10);
    // fitted values unchanged
    Eigen::MatrixXd diff = base.residuals - fit.residuals;
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ols: coefficients are invariant to country and regressor ordering") {
    const int J = 4, T = 30;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.regressors.push_back({.name = "Z"});
    dgp.slopes["Z"] = Eigen::VectorXd::Constant(1, -0.7);
    auto synth = synthesize_dataset(dgp, 37);

    ModelSpec spec = per_country_spec({"X"});
    spec.regressors.emplace_back("Z", SlopeScope::Pooled);
    FitResult base = fit_ols(synth.dataset, spec);

    // permute countries
    std::vector<std::string> perm{"C2", "C0", "C3", "C1"};
    PanelDataset permuted(perm, synth.dataset.time_index());
    for (const auto& name : synth.dataset.variable_names()) {
        Eigen::MatrixXd m(T, J);
        for (int j = 0; j < J; ++j)
            m.col(j) = synth.dataset.values(name).col(synth.dataset.country_index(perm[static_cast<std::size_t>(j)]));
        permuted = permuted.with_variable(name, synth.dataset.unit(name), std::move(m));
    }
    FitResult fit_p = fit_ols(permuted, spec);
    for (const auto& country : perm)
        CHECK(std::abs(fit_p.coefficient("X", country) - base.coefficient("X", country)) < 1e-9);
    CHECK(std::abs(fit_p.coefficient("Z") - base.coefficient("Z")) < 1e-9);

    // permute regressors
    ModelSpec swapped;
    swapped.dependent = "Y";
    swapped.regressors.emplace_back("Z", SlopeScope::Pooled);
    swapped.regressors.emplace_back("X", SlopeScope::PerCountry);
    swapped.country_effects = true;
    FitResult fit_r = fit_ols(synth.dataset, swapped);
    for (const auto& country : synth.dataset.countries())
        CHECK(std::abs(fit_r.coefficient("X", country) - base.coefficient("X", country)) < 1e-9);
}

TEST_CASE("ols: rank deficiency fails loudly and names the columns") {
    auto dgp = testutil::basic_dgp(3, 30);
    auto synth = synthesize_dataset(dgp, 41);
    PanelDataset ds = synth.dataset.with_variable("XCOPY", "u", synth.dataset.values("X"));
    ModelSpec spec = per_country_spec({"X"});
    spec.regressors.emplace_back("XCOPY", SlopeScope::PerCountry);
    try {
        fit_ols(ds, spec);
        FAIL("expected RankDeficientDesign");
    } catch (const Error& e) {
        CHECK(e.error_class() == "RankDeficientDesign");
        CHECK(std::string(e.what()).find("XCOPY") != std::string::npos);
    }
}

TEST_CASE("ols: too few observations is an input error") {
    PanelDataset ds(std::vector<std::string>{"AT"}, period_range(Period{Frequency::Yearly, 2000, 1}, 2));
    ds = ds.with_variable("X", "u", Eigen::MatrixXd::Random(2, 1));
    ds = ds.with_variable("Y", "u", Eigen::MatrixXd::Random(2, 1));
    ModelSpec spec = per_country_spec({"X"});
    CHECK_THROWS_AS(fit_ols(ds, spec), Error);
}

TEST_CASE("fgls: equals OLS when every equation shares the same design") {
    PanelDataset ds = common_regressor_panel(5, 60, 51, 1.0);
    ModelSpec spec = per_country_spec({"X"});
    FitResult ols = fit_ols(ds, spec);
    ModelSpec sur = spec;
    sur.weighting = Weighting::CrossSectionSUR;
    sur.covariance = CovarianceType::PCSE;
    FitResult fgls = fit_fgls_sur(ds, sur);
    for (const auto& c : ds.countries())
        CHECK(std::abs(fgls.coefficient("X", c) - ols.coefficient("X", c)) < 1e-6);
}

TEST_CASE("fgls: beats OLS under strong cross-country correlation") {
    const int J = 5, T = 40;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.sigma = testutil::equicorrelated(J, 1.0, 0.9);
    const int reps = 500;
    double se_ols = 0.0, se_fgls = 0.0;
    ModelSpec spec = per_country_spec({"X"});
    ModelSpec sur = spec;
    sur.weighting = Weighting::CrossSectionSUR;
    sur.covariance = CovarianceType::PCSE;
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 5000 + static_cast<std::uint64_t>(rep));
        FitResult a = fit_ols(synth.dataset, spec);
        FitResult b = fit_fgls_sur(synth.dataset, sur);
        for (int j = 0; j < J; ++j) {
            double truth = dgp.slopes["X"](j);
            const auto& country = dgp.countries[static_cast<std::size_t>(j)];
            se_ols += std::pow(a.coefficient("X", country) - truth, 2);
            se_fgls += std::pow(b.coefficient("X", country) - truth, 2);
        }
    }
    CHECK(std::sqrt(se_fgls) <= std::sqrt(se_ols));
}

TEST_CASE("fgls: paper-scale fit converges in under five seconds") {
    auto dgp = testutil::basic_dgp(10, 108);
    for (int k = 0; k < 8; ++k) {
        std::string name = "R" + std::to_string(k);
        dgp.regressors.push_back({.name = name});
        Eigen::VectorXd s(10);
        for (int j = 0; j < 10; ++j) s(j) = 0.2 * (k - 4) + 0.05 * j;
        dgp.slopes[name] = s;
    }
    dgp.seasonal_effects = Eigen::VectorXd::LinSpaced(12, -1.0, 1.0);
    dgp.sigma = testutil::equicorrelated(10, 2.0, 0.3);
    auto synth = synthesize_dataset(dgp, 61);

    ModelSpec spec = per_country_spec({"X", "R0", "R1", "R2", "R3", "R4", "R5", "R6", "R7"});
    spec.seasonal_effects = true;
    spec.weighting = Weighting::CrossSectionSUR;
    spec.covariance = CovarianceType::PCSE;

    auto t0 = std::chrono::steady_clock::now();
    FitResult fit = fit_fgls_sur(synth.dataset, spec);
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(fit.converged);
    CHECK(dt < 5.0);
    CHECK_FALSE(fit.has_flag("fgls_nonmonotone"));
    // PCSE covariance: symmetric with non-negative diagonal
    Eigen::MatrixXd v = fit.covariance;
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * v.cwiseAbs().maxCoeff());
    CHECK(v.diagonal().minCoeff() >= 0.0);
}

TEST_CASE("fgls: more countries than periods cannot estimate sigma") {
    auto dgp = testutil::basic_dgp(10, 9, Frequency::Yearly);
    auto synth = synthesize_dataset(dgp, 67);
    ModelSpec spec = per_country_spec({"X"});
    spec.weighting = Weighting::CrossSectionSUR;
    try {
        fit_fgls_sur(synth.dataset, spec);
        FAIL("expected SingularSigma");
    } catch (const Error& e) {
        CHECK(e.error_class() == "SingularSigma");
    }
}

TEST_CASE("arma: empty lag set reduces to plain FGLS") {
    auto dgp = testutil::basic_dgp(4, 50);
    dgp.sigma = testutil::equicorrelated(4, 1.0, 0.4);
    auto synth = synthesize_dataset(dgp, 71);
    ModelSpec spec = per_country_spec({"X"});
    spec.weighting = Weighting::CrossSectionSUR;
    spec.covariance = CovarianceType::PCSE;
    FitResult a = fit_fgls_sur(synth.dataset, spec);
    FitResult b = fit_arma_errors(synth.dataset, spec);  // arma empty
    CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("arma: AR(1) coefficient recovered within three standard errors") {
    const int J = 5, T = 100;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.regressors.clear();
    dgp.slopes.clear();
    dgp.ar = {{1, 0.5}};
    const int reps = 500;
    int within = 0;
    ModelSpec spec;
    spec.dependent = "Y";
    spec.country_effects = true;
    spec.arma.ar = {1};
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 9000 + static_cast<std::uint64_t>(rep));
        FitResult fit = fit_arma_errors(synth.dataset, spec);
        double err = fit.coefficient("ar_1") - 0.5;
        if (std::abs(err) <= 3.0 * fit.std_error("ar_1")) ++within;
    }
    CHECK(static_cast<double>(within) / reps >= 0.95);
}

TEST_CASE("arma: monthly lag set {1,12,24} recovered with correct signs") {
    const int J = 10, T = 108;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.ar = {{1, 0.271}, {12, -0.235}, {24, -0.173}};
    dgp.sigma = testutil::equicorrelated(J, 1.0, 0.3);
    ModelSpec spec = per_country_spec({"X"});
    spec.weighting = Weighting::CrossSectionSUR;
    spec.covariance = CovarianceType::PCSE;
    spec.arma.ar = {1, 12, 24};
    const int reps = 200;
    int all_signs = 0;
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 11000 + static_cast<std::uint64_t>(rep));
        FitResult fit = fit_arma_errors(synth.dataset, spec);
        bool ok = fit.coefficient("ar_1") > 0 && fit.coefficient("ar_12") < 0 &&
                  fit.coefficient("ar_24") < 0;
        if (ok) ++all_signs;
    }
    CHECK(static_cast<double>(all_signs) / reps >= 0.95);
}

TEST_CASE("arma: explosive residual dynamics are rejected") {
    PanelDataset ds(std::vector<std::string>{"AT", "BE"},
                    period_range(Period{Frequency::Monthly, 2008, 1}, 60));
    Eigen::MatrixXd y(60, 2);
    for (int t = 0; t < 60; ++t)
        for (int j = 0; j < 2; ++j)
            y(t, j) = std::pow(1.1, t) * (j ? -1.0 : 1.0) + 0.01 * rng::gauss(3, 0, j, t);
    ds = ds.with_variable("Y", "u", y);
    ModelSpec spec;
    spec.dependent = "Y";
    spec.arma.ar = {1};
    spec.country_effects = true;
    try {
        fit_arma_errors(ds, spec);
        FAIL("expected NonStationaryArEstimate");
    } catch (const Error& e) {
        CHECK(e.error_class() == "NonStationaryArEstimate");
    }
}

TEST_CASE("arma: moving-average term estimated by Gauss-Newton") {
    const int J = 4, T = 200;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.regressors.clear();
    dgp.slopes.clear();
    dgp.ma = {{1, 0.4}};
    ModelSpec spec;
    spec.dependent = "Y";
    spec.country_effects = true;
    spec.arma.ma = {1};
    double sum = 0.0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 13000 + static_cast<std::uint64_t>(rep));
        FitResult fit = fit_arma_errors(synth.dataset, spec);
        sum += fit.coefficient("ma_1");
    }
    CHECK(std::abs(sum / reps - 0.4) < 0.05);
}

TEST_CASE("arma: per-country scope estimates one filter per country") {
    const int J = 3, T = 120;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.regressors.clear();
    dgp.slopes.clear();
    dgp.ar = {{1, 0.5}};
    auto synth = synthesize_dataset(dgp, 77);
    ModelSpec spec;
    spec.dependent = "Y";
    spec.country_effects = true;
    spec.arma.ar = {1};
    spec.arma_scope = SlopeScope::PerCountry;
    FitResult fit = fit_arma_errors(synth.dataset, spec);
    for (const auto& c : synth.dataset.countries()) {
        CHECK(fit.find("ar_1", c).has_value());
        CHECK(std::abs(fit.coefficient("ar_1", c) - 0.5) < 0.3);
    }
}

TEST_CASE("random effects: theta = 0 reduces to pooled OLS") {
    const int J = 8, T = 40;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.country_effects = Eigen::VectorXd::Zero(J);  // no random effect
    dgp.slopes["X"] = Eigen::VectorXd::Constant(1, 1.5);
    ModelSpec spec;
    spec.dependent = "Y";
    spec.regressors.emplace_back("X", SlopeScope::Pooled);

    bool found_clamped = false;
    for (std::uint64_t seed = 200; seed < 240; ++seed) {
        auto synth = synthesize_dataset(dgp, seed);
        FitResult re = fit_random_effects(synth.dataset, spec);
        if (!re.has_flag("NegativeVarianceComponent")) continue;
        found_clamped = true;
        CHECK(re.details.at("theta") == 0.0);
        PanelDataset with_one = synth.dataset.with_variable(
            "ONE", "u", Eigen::MatrixXd::Ones(T, J));
        ModelSpec pooled;
        pooled.dependent = "Y";
        pooled.regressors.emplace_back("X", SlopeScope::Pooled);
        pooled.regressors.emplace_back("ONE", SlopeScope::Pooled);
        FitResult ols = fit_ols(with_one, pooled);
        CHECK(std::abs(re.coefficient("X") - ols.coefficient("X")) < 1e-6);
        break;
    }
    CHECK(found_clamped);
}

TEST_CASE("random effects: approaches fixed effects as the country variance grows") {
    const int J = 10, T = 40;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.country_effects = Eigen::VectorXd::LinSpaced(J, -40.0, 40.0);
    dgp.slopes["X"] = Eigen::VectorXd::Constant(1, 1.5);
    auto synth = synthesize_dataset(dgp, 83);
    ModelSpec pooled;
    pooled.dependent = "Y";
    pooled.regressors.emplace_back("X", SlopeScope::Pooled);
    ModelSpec fe_spec = pooled;
    fe_spec.country_effects = true;
    FitResult fe = fit_ols(synth.dataset, fe_spec);
    FitResult re = fit_random_effects(synth.dataset, pooled);
    CHECK(re.details.at("theta") > 0.9);
    double se = std::sqrt(std::pow(fe.std_error("X"), 2) + std::pow(re.std_error("X"), 2));
    CHECK(std::abs(fe.coefficient("X") - re.coefficient("X")) <= 3.0 * se);
}

TEST_CASE("random effects: biased under regressor-effect correlation, fixed effects not") {
    const int J = 10, T = 30;
    auto dgp = testutil::basic_dgp(J, T);
    dgp.country_effects = Eigen::VectorXd::LinSpaced(J, -3.0, 3.0);
    dgp.regressors[0].effect_loading = 0.8;
    dgp.slopes["X"] = Eigen::VectorXd::Constant(1, 1.0);
    ModelSpec pooled;
    pooled.dependent = "Y";
    pooled.regressors.emplace_back("X", SlopeScope::Pooled);
    ModelSpec fe_spec = pooled;
    fe_spec.country_effects = true;

    const int reps = 500;
    double fe_err = 0.0, re_err = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        auto synth = synthesize_dataset(dgp, 15000 + static_cast<std::uint64_t>(rep));
        fe_err += fit_ols(synth.dataset, fe_spec).coefficient("X") - 1.0;
        re_err += fit_random_effects(synth.dataset, pooled).coefficient("X") - 1.0;
    }
    fe_err /= reps;
    re_err /= reps;
    CHECK(std::abs(fe_err) < 0.01);
    CHECK(std::abs(re_err) > 5.0 * std::abs(fe_err));
}

TEST_CASE("pooled growth: exact relation recovered exactly") {
    const int J = 3, T = 12;
    PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Yearly, 2008, 1}, T));
    Eigen::MatrixXd ghg(T, J), consm(T, J), res(T, J);
    for (int j = 0; j < J; ++j) {
        double g = 1000.0 * (j + 1), c = 500.0 * (j + 1), r = 0.2;
        for (int t = 0; t < T; ++t) {
            ghg(t, j) = g;
            consm(t, j) = c;
            res(t, j) = r;
            double dc = 0.01 * std::sin(0.9 * t + j) + 0.005;
            double dr = 0.02 * std::cos(1.3 * t + j);
            c *= std::exp(dc);
            r *= std::exp(dr);
            g *= std::exp(0.01 * dc);  // GHG responds only to consumption
        }
    }
    PanelDataset full = ds.with_variable("GHG", "kt", ghg)
                            .with_variable("CONSM", "GWh", consm)
                            .with_variable("RES", "fraction", res);
    FitResult fit = fit_pooled_growth(full);
    for (const auto& c : full.countries()) {
        double b0 = fit.coefficient("const") + (c == "C0" ? 0.0 : fit.coefficient("fe", c));
        CHECK(std::abs(b0) < 1e-9);
        CHECK(std::abs(fit.coefficient("dlog_CONSM", c) - 0.01) < 1e-9);
        CHECK(std::abs(fit.coefficient("dlog_RES", c)) < 1e-9);
        CHECK(fit.details.at("sigma[" + c + "]") < 1e-9);
    }
}

TEST_CASE("pooled growth: constant dependent gives zero coefficients and zero sigma") {
    const int J = 2, T = 10;
    PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Yearly, 2008, 1}, T));
    Eigen::MatrixXd ghg = Eigen::MatrixXd::Constant(T, J, 500.0);
    Eigen::MatrixXd consm(T, J), res(T, J);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) {
            consm(t, j) = 100.0 * std::exp(0.1 * std::sin(0.8 * t + j) + 0.01 * t);
            res(t, j) = 0.2 + 0.05 * std::cos(1.1 * t + 0.5 * j) + 0.01 * t;
        }
    PanelDataset full = ds.with_variable("GHG", "kt", ghg)
                            .with_variable("CONSM", "GWh", consm)
                            .with_variable("RES", "fraction", res);
    FitResult fit = fit_pooled_growth(full);
    for (const auto& c : full.countries()) {
        CHECK(std::abs(fit.coefficient("dlog_CONSM", c)) < 1e-9);
        CHECK(std::abs(fit.coefficient("dlog_RES", c)) < 1e-9);
        CHECK(fit.details.at("sigma[" + c + "]") < 1e-12);
    }
}

TEST_CASE("pooled growth: coefficients recovered within three standard errors") {
    const int J = 3, T = 30;
    const double b0 = -0.02, b1 = 0.5, b2 = -0.1, sigma = 0.01;
    const int reps = 500;
    int within = 0, total = 0;
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t seed = 17000 + static_cast<std::uint64_t>(rep);
        PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Yearly, 2000, 1}, T));
        Eigen::MatrixXd ghg(T, J), consm(T, J), res(T, J);
        for (int j = 0; j < J; ++j) {
            double g = 1000.0, c = 500.0, r = 0.3;
            for (int t = 0; t < T; ++t) {
                ghg(t, j) = g;
                consm(t, j) = c;
                res(t, j) = std::clamp(r, 0.01, 0.99);
                double dc = 0.02 * rng::gauss(seed, 1, j, t);
                double dr = 0.05 * rng::gauss(seed, 2, j, t);
                double dg = b0 + b1 * dc + b2 * dr + sigma * rng::gauss(seed, 3, j, t);
                c *= std::exp(dc);
                r = std::clamp(r * std::exp(dr), 0.01, 0.99);
                g *= std::exp(dg);
            }
        }
        PanelDataset full = ds.with_variable("GHG", "kt", ghg)
                                .with_variable("CONSM", "GWh", consm)
                                .with_variable("RES", "fraction", res);
        FitResult fit = fit_pooled_growth(full);
        for (const auto& c : full.countries()) {
            ++total;
            if (std::abs(fit.coefficient("dlog_CONSM", c) - b1) <=
                3.0 * fit.std_error("dlog_CONSM", c))
                ++within;
        }
    }
    CHECK(static_cast<double>(within) / total >= 0.95);
}

TEST_CASE("pooled growth: rejects non-positive series") {
    const int J = 2, T = 8;
    PanelDataset ds(testutil::codes(J), period_range(Period{Frequency::Yearly, 2008, 1}, T));
    Eigen::MatrixXd ghg = Eigen::MatrixXd::Constant(T, J, 10.0);
    ghg(3, 1) = 0.0;
    PanelDataset full = ds.with_variable("GHG", "kt", ghg)
                            .with_variable("CONSM", "GWh", Eigen::MatrixXd::Constant(T, J, 5.0))
                            .with_variable("RES", "fraction", Eigen::MatrixXd::Constant(T, J, 0.5));
    try {
        fit_pooled_growth(full);
        FAIL("expected NonPositiveSeries");
    } catch (const Error& e) {
        CHECK(e.error_class() == "NonPositiveSeries");
    }
}

TEST_CASE("wedge-shaped model recovers coefficient signs at the paper's sample shape") {
    // J = 10 countries, T = 18 half-years, positive RES effects and
    // negative lagged-deficit effects, AR(1) noise with SUR weighting.
    const int J = 10, T = 18;
    const int reps = 50;
    int signs_ok = 0, signs_total = 0;
    for (int rep = 0; rep < reps; ++rep) {
        std::uint64_t seed = 19000 + static_cast<std::uint64_t>(rep);
        PanelDgp dgp;
        dgp.countries = testutil::codes(J);
        dgp.start = Period{Frequency::Biannual, 2008, 1};
        dgp.n_periods = T;
        dgp.regressors.push_back({.name = "RES",
                                  .dist = DgpRegressor::Dist::Uniform,
                                  .lo = 0.1,
                                  .hi = 0.6});
        dgp.regressors.push_back({.name = "DPB", .mean = 0.0, .sd = 1.0});
        Eigen::VectorXd delta(J), phi(J);
        for (int j = 0; j < J; ++j) {
            delta(j) = 40.0 + 8.0 * j;
            phi(j) = -0.5 - 0.25 * j;
        }
        dgp.slopes["RES"] = delta;
        dgp.slopes["DPB"] = phi;
        dgp.country_effects = Eigen::VectorXd::LinSpaced(J, 90.0, 260.0);
        dgp.sigma = testutil::equicorrelated(J, 1.5 * 1.5, 0.3);
        dgp.ar = {{1, 0.5}};
        auto synth = synthesize_dataset(dgp, seed);

        ModelSpec spec = per_country_spec({"RES", "DPB"});
        spec.weighting = Weighting::CrossSectionSUR;
        spec.covariance = CovarianceType::PCSE;
        spec.arma.ar = {1};
        FitOptions two_step;
        two_step.two_step = true;
        FitResult fit = fit_panel(synth.dataset, spec, two_step);
        for (int j = 0; j < J; ++j) {
            const auto& c = dgp.countries[static_cast<std::size_t>(j)];
            signs_total += 2;
            if (fit.coefficient("RES", c) > 0) ++signs_ok;
            if (fit.coefficient("DPB", c) < 0) ++signs_ok;
        }
    }
    CHECK(static_cast<double>(signs_ok) / signs_total >= 0.95);
}
