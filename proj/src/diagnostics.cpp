#include "cepkit/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cepkit/errors.hpp"
#include "cepkit/stats.hpp"

namespace cepkit {

namespace {

/// Symmetric pseudo-inverse; *flagged = true when any eigenvalue was
/// dropped as numerically zero (or negative).
Eigen::MatrixXd sym_pinv(const Eigen::MatrixXd& m, bool* flagged) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto& vals = es.eigenvalues();
    double cutoff = vals.cwiseAbs().maxCoeff() * 1e-12;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
    *flagged = false;
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) > cutoff)
            inv(i) = 1.0 / vals(i);
        else
            *flagged = true;
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TestReport wald_slope_equality(const FitResult& fit, const std::string& regressor) {
    const int J = static_cast<int>(fit.countries.size());
    if (J < 2) throw Error::input("InvalidArgument", "slope-equality test needs at least 2 countries");

    TestReport rep;
    rep.name = "wald_slope_equality(" + regressor + ")";
    rep.dof = J - 1;

    if (fit.find(regressor, "")) {
        // Pooled scope: the equality restriction holds identically.
        rep.statistic = 0.0;
        rep.p_value = 1.0;
        rep.verdict_note = "regressor is pooled; contrasts are identically zero";
        return rep;
    }

    std::vector<int> idx;
    for (const auto& c : fit.countries) {
        auto i = fit.find(regressor, c);
        if (!i)
            throw Error::input("UnknownVariable",
                               "fit has no per-country coefficient for '" + regressor + "' in " + c);
        idx.push_back(*i);
    }

    Eigen::VectorXd beta(J);
    Eigen::MatrixXd V(J, J);
    for (int a = 0; a < J; ++a) {
        beta(a) = fit.beta(idx[static_cast<std::size_t>(a)]);
        for (int b = 0; b < J; ++b)
            V(a, b) = fit.covariance(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    }

    // R encodes beta_1 - beta_j for j = 2..J.
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(J - 1, J);
    for (int j = 1; j < J; ++j) {
        R(j - 1, 0) = 1.0;
        R(j - 1, j) = -1.0;
    }
    Eigen::VectorXd c = R * beta;
    Eigen::MatrixXd M = R * V * R.transpose();

    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) {
        rep.statistic = c.dot(llt.solve(c));
    } else {
        bool flagged = false;
        rep.statistic = c.dot(sym_pinv(M, &flagged) * c);
        rep.flags.push_back("SingularRestrictionCovariance");
    }
    rep.statistic = std::max(0.0, rep.statistic);
    rep.p_value = chi2_sf(rep.statistic, rep.dof);
    rep.verdict_note = rep.p_value < 0.01 ? "equal-slopes null rejected at 1%" : "equal-slopes null not rejected at 1%";
    return rep;
}

TestReport hausman(const FitResult& fixed, const FitResult& random) {
    std::vector<std::string> fixed_set, random_set;
    for (const auto& [name, scope] : fixed.spec.regressors)
        if (scope == SlopeScope::Pooled && fixed.find(name, "")) fixed_set.push_back(name);
    for (const auto& [name, scope] : random.spec.regressors)
        if (scope == SlopeScope::Pooled && random.find(name, "")) random_set.push_back(name);
    for (const auto& name : fixed_set)
        if (std::find(random_set.begin(), random_set.end(), name) == random_set.end())
            throw Error::input("IncompatibleFits",
                               "random-effects fit lacks regressor '" + name + "'");
    for (const auto& name : random_set)
        if (std::find(fixed_set.begin(), fixed_set.end(), name) == fixed_set.end())
            throw Error::input("IncompatibleFits",
                               "fixed-effects fit lacks regressor '" + name + "'");
    const auto& common = fixed_set;
    if (common.empty())
        throw Error::input("IncompatibleFits", "fits share no pooled regressors to compare");

    // Rescale both covariances to the efficient model's error variance
    // when classical scales are available; the difference of the bare
    // matrices is dominated by s^2 estimation noise otherwise.
    double scale_fixed = 1.0, scale_random = 1.0;
    auto f_s2 = fixed.details.find("s2");
    auto r_s2 = random.details.find("s2");
    if (f_s2 != fixed.details.end() && r_s2 != random.details.end() && f_s2->second > 0 &&
        r_s2->second > 0) {
        scale_fixed = r_s2->second / f_s2->second;
        scale_random = 1.0;
    }

    const int k = static_cast<int>(common.size());
    Eigen::VectorXd diff(k);
    Eigen::MatrixXd vdiff(k, k);
    for (int a = 0; a < k; ++a) {
        int fa = *fixed.find(common[static_cast<std::size_t>(a)], "");
        int ra = *random.find(common[static_cast<std::size_t>(a)], "");
        diff(a) = fixed.beta(fa) - random.beta(ra);
        for (int b = 0; b < k; ++b) {
            int fb = *fixed.find(common[static_cast<std::size_t>(b)], "");
            int rb = *random.find(common[static_cast<std::size_t>(b)], "");
            vdiff(a, b) = scale_fixed * fixed.covariance(fa, fb) -
                          scale_random * random.covariance(ra, rb);
        }
    }

    TestReport rep;
    rep.name = "hausman";
    rep.dof = k;
    Eigen::LLT<Eigen::MatrixXd> llt(vdiff);
    if (diff.isZero(0.0)) {
        rep.statistic = 0.0;
    } else if (llt.info() == Eigen::Success) {
        rep.statistic = diff.dot(llt.solve(diff));
    } else {
        bool flagged = false;
        rep.statistic = diff.dot(sym_pinv(vdiff, &flagged) * diff);
        rep.flags.push_back("NonPositiveDefiniteDifference");
    }
    rep.statistic = std::max(0.0, rep.statistic);
    rep.p_value = chi2_sf(rep.statistic, rep.dof);
    rep.verdict_note = rep.p_value < 0.05 ? "exogeneity rejected; fixed effects preferred"
                                          : "exogeneity not rejected";
    return rep;
}

VifResult vif(const PanelDataset& ds, const std::vector<std::string>& regressors) {
    if (regressors.size() < 2)
        throw Error::input("InvalidArgument", "VIF needs at least 2 regressors");
    const int J = ds.n_countries();
    const int T = ds.n_periods();
    const int n = T * J;
    const int k = static_cast<int>(regressors.size());

    Eigen::MatrixXd X(n, k);
    for (int c = 0; c < k; ++c) {
        const auto& m = ds.values(regressors[static_cast<std::size_t>(c)]);
        if (ds.has_missing(regressors[static_cast<std::size_t>(c)]))
            throw Error::input("MissingInput",
                               "VIF input '" + regressors[static_cast<std::size_t>(c)] + "' has missing cells");
        for (int j = 0; j < J; ++j) X.col(c).segment(j * T, T) = m.col(j);
    }

    VifResult out;
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd y = X.col(c);
        Eigen::MatrixXd A(n, k);  // intercept + other regressors
        A.col(0).setOnes();
        int col = 1;
        for (int o = 0; o < k; ++o)
            if (o != c) A.col(col++) = X.col(o);
        Eigen::VectorXd beta = (A.transpose() * A).ldlt().solve(A.transpose() * y);
        double rss = (y - A * beta).squaredNorm();
        double tss = (y.array() - y.mean()).square().sum();
        const auto& name = regressors[static_cast<std::size_t>(c)];
        if (tss <= 0.0) {
            // Constant regressor: collinear with the intercept.
            out.values[name] = std::numeric_limits<double>::infinity();
            out.offenders.push_back(name);
            continue;
        }
        double r2 = 1.0 - rss / tss;
        if (r2 >= 1.0 - 1e-12) {
            out.values[name] = std::numeric_limits<double>::infinity();
            out.offenders.push_back(name);
        } else {
            out.values[name] = 1.0 / (1.0 - r2);
        }
    }
    if (!out.offenders.empty()) out.flags.push_back("PerfectCollinearity");
    return out;
}

double durbin_watson(const Eigen::MatrixXd& residuals) {
    if (residuals.rows() < 2)
        throw Error::input("InvalidArgument", "Durbin-Watson needs series of length >= 2");
    double num = 0.0, den = 0.0;
    for (int j = 0; j < residuals.cols(); ++j) {
        for (int t = 1; t < residuals.rows(); ++t) {
            double d = residuals(t, j) - residuals(t - 1, j);
            num += d * d;
        }
        den += residuals.col(j).squaredNorm();
    }
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

Eigen::VectorXd durbin_watson_by_country(const Eigen::MatrixXd& residuals) {
    Eigen::VectorXd out(residuals.cols());
    for (int j = 0; j < residuals.cols(); ++j) out(j) = durbin_watson(residuals.col(j));
    return out;
}

double aic(double loglik, int n_params) { return 2.0 * n_params - 2.0 * loglik; }

}  // namespace cepkit
