#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cepkit/model_spec.hpp"
#include "cepkit/period.hpp"

namespace cepkit {

/// Identifies one estimated coefficient: a regressor (or synthetic term
/// such as "const", "fe", "season", "ar", "ma") plus the country it is
/// scoped to; empty country means pooled.
struct CoefKey {
    std::string regressor;
    std::string country;
    std::string label() const { return country.empty() ? regressor : regressor + "[" + country + "]"; }
    friend bool operator==(const CoefKey& a, const CoefKey& b) {
        return a.regressor == b.regressor && a.country == b.country;
    }
};

struct FitResult {
    ModelSpec spec;
    std::vector<std::string> countries;
    std::vector<Period> sample;  // effective estimation sample

    std::vector<CoefKey> names;
    Eigen::VectorXd beta;
    Eigen::MatrixXd covariance;

    Eigen::MatrixXd residuals;    // T_eff x J, regression scale (eta-hat)
    Eigen::MatrixXd innovations;  // rows after the AR filter warm-up (epsilon-hat)
    Eigen::MatrixXd sigma_cross;  // J x J cross-section innovation covariance

    double loglik = 0.0;
    double r2 = 0.0;
    double r2_adjusted = 0.0;
    double dw = 0.0;
    int n_obs = 0;
    int n_params = 0;

    bool converged = true;
    int iterations = 0;
    std::vector<std::string> flags;
    std::map<std::string, double> details;  // estimator-specific extras

    std::optional<int> find(const std::string& regressor, const std::string& country = "") const;
    double coefficient(const std::string& regressor, const std::string& country = "") const;
    double std_error(const std::string& regressor, const std::string& country = "") const;
    bool has_flag(const std::string& flag) const;
};

}  // namespace cepkit
