#include "cepkit/synth.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cepkit/errors.hpp"
#include "cepkit/rng.hpp"

namespace cepkit {

namespace {

// rng stream tags within a synthesized dataset
constexpr std::uint64_t kInnovationStream = 0;
constexpr std::uint64_t kRegressorStreamBase = 2;

int max_lag(const std::vector<std::pair<int, double>>& lags) {
    int m = 0;
    for (const auto& [l, _] : lags) m = std::max(m, l);
    return m;
}

}  // namespace

bool ar_polynomial_stationary(const std::vector<std::pair<int, double>>& ar) {
    int p = max_lag(ar);
    if (p == 0) return true;
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
    for (const auto& [l, v] : ar) phi(l - 1) += v;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    companion.row(0) = phi.transpose();
    if (p > 1) companion.block(1, 0, p - 1, p - 1).setIdentity();
    auto eigs = companion.eigenvalues();
    double radius = 0.0;
    for (int i = 0; i < eigs.size(); ++i) radius = std::max(radius, std::abs(eigs(i)));
    return radius < 1.0 - 1e-12;
}

SynthesizedPanel synthesize_dataset(const PanelDgp& dgp, std::uint64_t seed) {
    const int J = static_cast<int>(dgp.countries.size());
    const int T = dgp.n_periods;
    if (J < 1 || T < 1) throw Error::input("InvalidArgument", "dgp needs countries and periods");
    for (const auto& [l, _] : dgp.ar)
        if (l < 1) throw Error::input("InvalidArgument", "ar lag must be positive");
    for (const auto& [l, _] : dgp.ma)
        if (l < 1) throw Error::input("InvalidArgument", "ma lag must be positive");
    if (!ar_polynomial_stationary(dgp.ar))
        throw Error::input("NonStationaryDgp", "AR polynomial roots on or inside the unit circle");
    if (dgp.sigma.rows() != J || dgp.sigma.cols() != J)
        throw Error::input("InvalidArgument", "sigma must be J x J");
    for (const auto& reg : dgp.regressors) {
        auto it = dgp.slopes.find(reg.name);
        if (it == dgp.slopes.end())
            throw Error::input("InvalidArgument", "no slope for regressor '" + reg.name + "'");
        if (it->second.size() != J && it->second.size() != 1)
            throw Error::input("InvalidArgument", "slope vector for '" + reg.name +
                                                      "' must have size J or 1");
    }
    if (dgp.country_effects.size() != 0 && dgp.country_effects.size() != J)
        throw Error::input("InvalidArgument", "country_effects must have size J");
    int ppy = periods_per_year(dgp.start.freq);
    if (dgp.seasonal_effects.size() != 0 && dgp.seasonal_effects.size() != ppy)
        throw Error::input("InvalidArgument", "seasonal_effects must have one entry per season");

    Eigen::LLT<Eigen::MatrixXd> llt(dgp.sigma);
    if (llt.info() != Eigen::Success)
        throw Error::input("InvalidArgument", "sigma is not positive definite");
    Eigen::MatrixXd chol = llt.matrixL();

    auto time_index = period_range(dgp.start, T);

    // Correlated innovations, incl. burn-in so the ARMA filter starts near
    // its stationary law.
    const int burn = dgp.burn_in;
    const int total = T + burn;
    const int p = max_lag(dgp.ar);
    const int q = max_lag(dgp.ma);
    Eigen::MatrixXd eps(total, J);
    for (int t = 0; t < total; ++t) {
        Eigen::VectorXd z(J);
        for (int j = 0; j < J; ++j)
            z(j) = rng::gauss(seed, kInnovationStream, static_cast<std::uint64_t>(j),
                              static_cast<std::uint64_t>(t));
        eps.row(t) = (chol * z).transpose();
    }
    Eigen::MatrixXd eta(total, J);
    for (int t = 0; t < total; ++t) {
        for (int j = 0; j < J; ++j) {
            double v = eps(t, j);
            for (const auto& [l, th] : dgp.ma)
                if (t - l >= 0) v -= th * eps(t - l, j);
            for (const auto& [l, ph] : dgp.ar)
                if (t - l >= 0) v += ph * eta(t - l, j);
            eta(t, j) = v;
        }
    }
    (void)p;
    (void)q;

    PanelDataset ds(dgp.countries, time_index);
    Eigen::MatrixXd y(T, J);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) {
            double v = eta(t + burn, j);
            if (dgp.country_effects.size()) v += dgp.country_effects(j);
            if (dgp.seasonal_effects.size())
                v += dgp.seasonal_effects(time_index[static_cast<std::size_t>(t)].sub - 1);
            y(t, j) = v;
        }

    std::uint64_t stream = kRegressorStreamBase;
    for (const auto& reg : dgp.regressors) {
        Eigen::MatrixXd x(T, J);
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < J; ++j) {
                double v;
                if (reg.dist == DgpRegressor::Dist::Normal)
                    v = reg.mean + reg.sd * rng::gauss(seed, stream, static_cast<std::uint64_t>(j),
                                                       static_cast<std::uint64_t>(t));
                else
                    v = reg.lo + (reg.hi - reg.lo) *
                                     rng::uniform(seed, stream, static_cast<std::uint64_t>(j),
                                                  static_cast<std::uint64_t>(t));
                if (reg.effect_loading != 0.0 && dgp.country_effects.size())
                    v += reg.effect_loading * dgp.country_effects(j);
                x(t, j) = v;
            }
        const auto& slope = dgp.slopes.at(reg.name);
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < J; ++j)
                y(t, j) += (slope.size() == 1 ? slope(0) : slope(j)) * x(t, j);
        ds = ds.with_variable(reg.name, reg.unit, std::move(x));
        ++stream;
    }

    ds = ds.with_variable(dgp.dependent, dgp.dependent_unit, std::move(y));
    return SynthesizedPanel{std::move(ds), dgp, seed};
}

}  // namespace cepkit
