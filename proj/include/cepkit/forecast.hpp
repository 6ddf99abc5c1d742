#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cepkit/fit_result.hpp"
#include "cepkit/panel.hpp"

namespace cepkit {

/// Deterministic linear trend with independent Gaussian innovations:
/// Y_t = beta0 + beta1 * t + sigma * eps, t counted in years from t0_year.
struct TrendModel {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double sigma = 0.0;  // residual sd, n-2 dof
    int t0_year = 0;
    std::pair<int, double> last_obs{0, 0.0};
    double loglik = 0.0;  // Gaussian likelihood at the ML variance
    int n_obs = 0;
    int n_params = 3;
};

/// AR(2) with intercept, fitted by conditional least squares.
struct Ar2Model {
    double mu = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double sigma = 0.0;
    std::array<std::pair<int, double>, 2> last_two_obs{};  // [0] = older, [1] = last
    bool stationary = true;
    double loglik = 0.0;
    int n_obs = 0;
    int n_params = 4;
};

/// Censored Normal Tobit on [0, 1]: latent linear trend observed only
/// inside the bounds, with probability mass at 0 and 1.
struct TobitModel {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double sigma = 0.0;
    int t0_year = 0;
    std::pair<int, double> last_obs{0, 0.0};
    double loglik = 0.0;
    int n_obs = 0;
    int n_params = 3;
    int n_censored = 0;
    bool converged = true;
};

using ForecastModel = std::variant<TrendModel, Ar2Model, TobitModel>;

struct YearlySeries {
    std::vector<int> years;  // consecutive
    Eigen::VectorXd values;
};

TrendModel fit_trend(const YearlySeries& series);
Ar2Model fit_ar2(const YearlySeries& series);
TobitModel fit_tobit(const YearlySeries& series);

/// Tobit log-likelihood at given parameters (exposed for gradient checks).
double tobit_loglik(const YearlySeries& series, double beta0, double beta1, double sigma);
Eigen::Vector3d tobit_loglik_gradient(const YearlySeries& series, double beta0, double beta1,
                                      double sigma);  // d/d(beta0, beta1, log sigma)

std::string model_name(const ForecastModel& m);
double model_aic(const ForecastModel& m);
double model_loglik(const ForecastModel& m);

struct ModelSelection {
    std::size_t chosen;  // index into candidates
    struct Row {
        std::string name;
        int n_params;
        double loglik;
        double aic;
    };
    std::vector<Row> table;
};

/// Lowest-AIC candidate among models fitted on the same series.
ModelSelection select_model(const std::vector<ForecastModel>& candidates);

/// Per-country yearly growth regression packaged for simulation:
/// dlog(GHG) = beta0 + beta1 dlog(CONSM) + beta2 dlog(RES) + sigma eps.
struct CountryGrowth {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double sigma = 0.0;
};

struct PooledGrowthModel {
    std::array<std::string, 2> drivers{"CONSM", "RES"};  // variables behind beta1, beta2
    std::map<std::string, CountryGrowth> by_country;
    std::map<std::string, std::pair<double, int>> start_levels;  // country -> (level, year)
};

/// Extract the simulation package from a fit_pooled_growth result, with
/// start levels taken from the panel's last observed year.
PooledGrowthModel make_growth_model(const FitResult& fit, const PanelDataset& ds,
                                    const std::string& dependent = "GHG");

YearlySeries yearly_series(const PanelDataset& ds, const std::string& variable,
                           const std::string& country);

}  // namespace cepkit
