#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "cepkit/forecast.hpp"
#include "cepkit/panel.hpp"
#include "cepkit/rng.hpp"
#include "cepkit/synth.hpp"

namespace testutil {

/// Kolmogorov-Smirnov distance of a sample against Uniform(0,1).
inline double ks_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = sample[i];
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Equicorrelated J x J covariance with unit-free scale.
inline Eigen::MatrixXd equicorrelated(int n, double variance, double rho) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, variance * rho);
    m.diagonal().setConstant(variance);
    return m;
}

inline std::vector<std::string> codes(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("C" + std::to_string(i));
    return out;
}

/// Baseline panel process: per-country slopes on one regressor "X",
/// country effects, spherical errors.
inline cepkit::PanelDgp basic_dgp(int countries, int periods,
                                  cepkit::Frequency freq = cepkit::Frequency::Monthly) {
    cepkit::PanelDgp dgp;
    dgp.countries = codes(countries);
    dgp.start = cepkit::Period{freq, 2008, 1};
    dgp.n_periods = periods;
    dgp.regressors.push_back({.name = "X"});
    Eigen::VectorXd slopes(countries);
    for (int j = 0; j < countries; ++j) slopes(j) = 1.0 + 0.25 * j;
    dgp.slopes["X"] = slopes;
    dgp.country_effects = Eigen::VectorXd::LinSpaced(countries, -1.0, 1.0);
    dgp.sigma = Eigen::MatrixXd::Identity(countries, countries);
    return dgp;
}

/// Yearly series from a vector of values starting at `year0`.
inline cepkit::YearlySeries series_of(int year0, const std::vector<double>& values) {
    cepkit::YearlySeries s;
    s.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) s.years.push_back(year0 + static_cast<int>(i));
    return s;
}

}  // namespace testutil
