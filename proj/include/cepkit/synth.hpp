#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cepkit/panel.hpp"

namespace cepkit {

/// Exogenous regressor in a synthetic generating process. An
/// effect_loading > 0 tilts the regressor toward the country effect,
/// which induces the endogeneity that random-effects estimators dislike.
struct DgpRegressor {
    enum class Dist { Normal, Uniform };
    std::string name;
    Dist dist = Dist::Normal;
    double mean = 0.0;
    double sd = 1.0;   // Normal
    double lo = 0.0;
    double hi = 1.0;   // Uniform
    double effect_loading = 0.0;
    std::string unit = "unit";
};

/// Panel generating process with known truth:
///   y_{t,j} = fe_j + season_{s(t)} + sum_v slope_{v,j} x_{v,t,j} + eta_{t,j}
/// where eta follows a (pooled) ARMA filter over innovations that are
/// contemporaneously correlated across countries with covariance `sigma`.
struct PanelDgp {
    std::vector<std::string> countries;
    Period start;
    int n_periods = 0;
    std::string dependent = "Y";
    std::string dependent_unit = "unit";
    std::vector<DgpRegressor> regressors;
    std::map<std::string, Eigen::VectorXd> slopes;  // size J = per-country, size 1 = pooled
    Eigen::VectorXd country_effects;                // size J, or empty
    Eigen::VectorXd seasonal_effects;               // size periods_per_year, or empty
    Eigen::MatrixXd sigma;                          // J x J innovation covariance
    std::vector<std::pair<int, double>> ar;         // (lag, coefficient)
    std::vector<std::pair<int, double>> ma;
    int burn_in = 200;
};

struct SynthesizedPanel {
    PanelDataset dataset;
    PanelDgp truth;
    std::uint64_t seed = 0;
};

/// True iff 1 - sum phi_l z^l has all roots strictly outside the unit circle.
bool ar_polynomial_stationary(const std::vector<std::pair<int, double>>& ar);

/// Draw a reproducible dataset from the process; identical seeds give
/// byte-identical datasets regardless of platform thread count.
SynthesizedPanel synthesize_dataset(const PanelDgp& dgp, std::uint64_t seed);

}  // namespace cepkit
