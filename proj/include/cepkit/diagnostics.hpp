#pragma once

#include <map>
#include <string>
#include <vector>

#include "cepkit/fit_result.hpp"
#include "cepkit/panel.hpp"

namespace cepkit {

struct TestReport {
    std::string name;
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    std::string verdict_note;
    std::vector<std::string> flags;
};

/// Wald test of the null that a per-country regressor has the same slope
/// in every country; chi-squared with J-1 degrees of freedom. Contrasts
/// take the first country as reference; the statistic does not depend on
/// that choice.
TestReport wald_slope_equality(const FitResult& fit, const std::string& regressor);

/// Hausman fixed-vs-random effects comparison over the pooled slope
/// coefficients the two fits share. Falls back to a pseudo-inverse (and
/// flags it) when the covariance difference is not positive definite.
TestReport hausman(const FitResult& fixed, const FitResult& random);

struct VifResult {
    std::map<std::string, double> values;  // +inf marks perfect collinearity
    std::vector<std::string> offenders;    // regressors involved in an exact relation
    std::vector<std::string> flags;
};

/// Variance inflation factors from pooled auxiliary regressions (with
/// intercept) of each regressor on the others.
VifResult vif(const PanelDataset& ds, const std::vector<std::string>& regressors);

/// Pooled Durbin-Watson statistic: per-country numerators and
/// denominators are summed before dividing. NaN when residuals are all
/// zero. Columns of `residuals` are country series.
double durbin_watson(const Eigen::MatrixXd& residuals);
Eigen::VectorXd durbin_watson_by_country(const Eigen::MatrixXd& residuals);

double aic(double loglik, int n_params);

}  // namespace cepkit
