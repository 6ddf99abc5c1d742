#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "cepkit/forecast.hpp"
#include "cepkit/targets.hpp"

namespace cepkit {

/// Simulated paths of one variable for one country. Rows are paths,
/// columns follow horizon_years. Draws come from a counter-based stream
/// keyed by (master_seed, country/variable, path, calendar year), so the
/// ensemble is reproducible bit for bit under any worker partitioning.
struct TrajectoryEnsemble {
    std::string country;
    std::string variable;
    std::vector<int> horizon_years;
    Eigen::MatrixXd paths;
    std::uint64_t master_seed = 0;
    std::string model_fingerprint;

    Eigen::VectorXd terminal() const { return paths.col(paths.cols() - 1); }
};

struct SimOptions {
    int n_paths = 100000;
    std::uint64_t master_seed = 0;
    int n_workers = 1;
    std::string country;   // labels the rng stream
    std::string variable;
};

/// Simulate a fitted univariate model from the year after its last
/// observation through end_year inclusive.
TrajectoryEnsemble simulate(const ForecastModel& model, int end_year, const SimOptions& opts);

/// Simulate the growth model under a scenario: each country's GHG level
/// compounds multiplicatively from its start level.
std::map<std::string, TrajectoryEnsemble> simulate_growth(const PooledGrowthModel& model,
                                                          const Scenario& scenario, int end_year,
                                                          int n_paths, std::uint64_t master_seed,
                                                          int n_workers = 1);

/// Terminal-year empirical quantiles, lower order-statistic convention.
std::map<double, double> quantiles(const TrajectoryEnsemble& e, const std::vector<double>& qs);

/// Fraction of terminal values meeting the target.
double compliance_probability(const TrajectoryEnsemble& e, double target, Direction direction);

/// Long-format dump of terminal values: country,variable,path,value.
void write_terminal_csv(std::ostream& out, const std::vector<const TrajectoryEnsemble*>& ensembles);

}  // namespace cepkit
