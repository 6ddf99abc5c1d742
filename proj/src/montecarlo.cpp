#include "cepkit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <thread>

#include "cepkit/errors.hpp"
#include "cepkit/rng.hpp"
#include "cepkit/serialize.hpp"
#include "cepkit/util.hpp"

namespace cepkit {

namespace {

std::uint64_t stream_tag(const std::string& country, const std::string& variable) {
    return fnv1a64(country + "/" + variable);
}

void run_partitioned(int n_paths, int n_workers, const std::function<void(int, int)>& body) {
    n_workers = std::max(1, n_workers);
    if (n_workers == 1) {
        body(0, n_paths);
        return;
    }
    std::vector<std::thread> workers;
    int chunk = (n_paths + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
        int lo = w * chunk;
        int hi = std::min(n_paths, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back(body, lo, hi);
    }
    for (auto& t : workers) t.join();
}

struct Anchor {
    int last_year;
};

Anchor model_anchor(const ForecastModel& m) {
    if (const auto* t = std::get_if<TrendModel>(&m)) return {t->last_obs.first};
    if (const auto* a = std::get_if<Ar2Model>(&m)) return {a->last_two_obs[1].first};
    return {std::get<TobitModel>(m).last_obs.first};
}

}  // namespace

TrajectoryEnsemble simulate(const ForecastModel& model, int end_year, const SimOptions& opts) {
    if (opts.n_paths < 1) throw Error::input("InvalidArgument", "n_paths must be >= 1");
    const int anchor = model_anchor(model).last_year;
    if (end_year <= anchor)
        throw Error::input("HorizonBeforeData", "end year " + std::to_string(end_year) +
                                                    " is not after the last observation (" +
                                                    std::to_string(anchor) + ")");
    const int H = end_year - anchor;
    TrajectoryEnsemble e;
    e.country = opts.country;
    e.variable = opts.variable;
    e.master_seed = opts.master_seed;
    e.model_fingerprint = fnv1a64_hex(serialize_model(model));
    for (int h = 1; h <= H; ++h) e.horizon_years.push_back(anchor + h);
    e.paths.resize(opts.n_paths, H);

    const std::uint64_t tag = stream_tag(opts.country, opts.variable);
    auto eps = [&](int path, int year) {
        return rng::gauss(opts.master_seed, tag, static_cast<std::uint64_t>(path),
                          static_cast<std::uint64_t>(year));
    };

    if (const auto* m = std::get_if<TrendModel>(&model)) {
        run_partitioned(opts.n_paths, opts.n_workers, [&](int lo, int hi) {
            for (int p = lo; p < hi; ++p)
                for (int h = 0; h < H; ++h) {
                    int year = e.horizon_years[static_cast<std::size_t>(h)];
                    double t = static_cast<double>(year - m->t0_year);
                    e.paths(p, h) = m->beta0 + m->beta1 * t + m->sigma * eps(p, year);
                }
        });
    } else if (const auto* m2 = std::get_if<Ar2Model>(&model)) {
        run_partitioned(opts.n_paths, opts.n_workers, [&](int lo, int hi) {
            for (int p = lo; p < hi; ++p) {
                double prev2 = m2->last_two_obs[0].second;
                double prev1 = m2->last_two_obs[1].second;
                for (int h = 0; h < H; ++h) {
                    int year = e.horizon_years[static_cast<std::size_t>(h)];
                    double v = m2->mu + m2->rho1 * prev1 + m2->rho2 * prev2 + m2->sigma * eps(p, year);
                    e.paths(p, h) = v;
                    prev2 = prev1;
                    prev1 = v;
                }
            }
        });
    } else {
        const auto& m3 = std::get<TobitModel>(model);
        run_partitioned(opts.n_paths, opts.n_workers, [&](int lo, int hi) {
            for (int p = lo; p < hi; ++p)
                for (int h = 0; h < H; ++h) {
                    int year = e.horizon_years[static_cast<std::size_t>(h)];
                    double t = static_cast<double>(year - m3.t0_year);
                    double latent = m3.beta0 + m3.beta1 * t + m3.sigma * eps(p, year);
                    e.paths(p, h) = std::clamp(latent, 0.0, 1.0);
                }
        });
    }
    return e;
}

std::map<std::string, TrajectoryEnsemble> simulate_growth(const PooledGrowthModel& model,
                                                          const Scenario& scenario, int end_year,
                                                          int n_paths, std::uint64_t master_seed,
                                                          int n_workers) {
    if (n_paths < 1) throw Error::input("InvalidArgument", "n_paths must be >= 1");
    scenario.validate();
    std::map<std::string, TrajectoryEnsemble> out;
    const std::string fingerprint = fnv1a64_hex(serialize_model(model));
    for (const auto& [country, growth] : model.by_country) {
        auto lvl = model.start_levels.find(country);
        if (lvl == model.start_levels.end())
            throw Error::input("MissingStartLevel", "no start level for country '" + country + "'");
        const double start_level = lvl->second.first;
        const int start_year = lvl->second.second;
        if (end_year <= start_year)
            throw Error::input("HorizonBeforeData",
                               "end year " + std::to_string(end_year) + " is not after the start level year (" +
                                   std::to_string(start_year) + ") for " + country);
        const double drift = growth.beta0 +
                             growth.beta1 * std::log1p(scenario.rate(model.drivers[0], country)) +
                             growth.beta2 * std::log1p(scenario.rate(model.drivers[1], country));
        const int H = end_year - start_year;

        TrajectoryEnsemble e;
        e.country = country;
        e.variable = "GHG";
        e.master_seed = master_seed;
        e.model_fingerprint = fingerprint;
        for (int h = 1; h <= H; ++h) e.horizon_years.push_back(start_year + h);
        e.paths.resize(n_paths, H);
        const std::uint64_t tag = stream_tag(country, "GHG");
        const double sigma = growth.sigma;
        run_partitioned(n_paths, n_workers, [&](int lo, int hi) {
            for (int p = lo; p < hi; ++p) {
                double level = start_level;
                for (int h = 0; h < H; ++h) {
                    int year = e.horizon_years[static_cast<std::size_t>(h)];
                    double z = rng::gauss(master_seed, tag, static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(year));
                    level *= std::exp(drift + sigma * z);
                    e.paths(p, h) = level;
                }
            }
        });
        out.emplace(country, std::move(e));
    }
    return out;
}

std::map<double, double> quantiles(const TrajectoryEnsemble& e, const std::vector<double>& qs) {
    for (double q : qs)
        if (!(q > 0.0 && q < 1.0))
            throw Error::input("InvalidArgument", "quantile probabilities must lie in (0,1)");
    Eigen::VectorXd terminal = e.terminal();
    std::vector<double> v(terminal.data(), terminal.data() + terminal.size());
    std::sort(v.begin(), v.end());
    std::map<double, double> out;
    const auto n = static_cast<double>(v.size());
    for (double q : qs) {
        auto idx = static_cast<long>(std::ceil(q * n)) - 1;
        idx = std::clamp<long>(idx, 0, static_cast<long>(v.size()) - 1);
        out[q] = v[static_cast<std::size_t>(idx)];
    }
    return out;
}

double compliance_probability(const TrajectoryEnsemble& e, double target, Direction direction) {
    Eigen::VectorXd terminal = e.terminal();
    long hits = 0;
    for (long i = 0; i < terminal.size(); ++i) {
        double v = terminal(i);
        if (direction == Direction::AtMost ? v <= target : v >= target) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(terminal.size());
}

void write_terminal_csv(std::ostream& out, const std::vector<const TrajectoryEnsemble*>& ensembles) {
    out << "country,variable,path,value\n";
    for (const auto* e : ensembles) {
        Eigen::VectorXd terminal = e->terminal();
        for (long p = 0; p < terminal.size(); ++p)
            out << e->country << ',' << e->variable << ',' << p << ',' << format_full(terminal(p))
                << '\n';
    }
}

}  // namespace cepkit
