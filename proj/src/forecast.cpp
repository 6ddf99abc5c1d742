#include "cepkit/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "cepkit/diagnostics.hpp"
#include "cepkit/errors.hpp"
#include "cepkit/stats.hpp"
#include "cepkit/synth.hpp"

namespace cepkit {

namespace {

double gaussian_ml_loglik(double rss, int n) {
    double s2 = std::max(rss / n, 1e-300);
    return -0.5 * n * (std::log(2.0 * M_PI * s2) + 1.0);
}

void check_years(const YearlySeries& s) {
    if (s.years.size() != static_cast<std::size_t>(s.values.size()))
        throw Error::input("InvalidArgument", "years and values have different lengths");
    for (std::size_t i = 1; i < s.years.size(); ++i)
        if (s.years[i] != s.years[i - 1] + 1)
            throw Error::input("InvalidArgument", "yearly series must cover consecutive years");
}

}  // namespace

TrendModel fit_trend(const YearlySeries& series) {
    check_years(series);
    const int n = static_cast<int>(series.values.size());
    if (n < 3) throw Error::input("TooFewObservations", "trend fit needs at least 3 observations");

    Eigen::MatrixXd A(n, 2);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = static_cast<double>(i);
    }
    Eigen::Vector2d beta = (A.transpose() * A).ldlt().solve(A.transpose() * series.values);
    double rss = (series.values - A * beta).squaredNorm();

    TrendModel m;
    m.beta0 = beta(0);
    m.beta1 = beta(1);
    m.sigma = std::sqrt(std::max(0.0, rss) / (n - 2));
    m.t0_year = series.years.front();
    m.last_obs = {series.years.back(), series.values(n - 1)};
    m.loglik = gaussian_ml_loglik(rss, n);
    m.n_obs = n;
    return m;
}

Ar2Model fit_ar2(const YearlySeries& series) {
    check_years(series);
    const int n = static_cast<int>(series.values.size());
    if (n < 5) throw Error::input("TooFewObservations", "AR(2) fit needs at least 5 observations");

    const int m_used = n - 2;
    Eigen::MatrixXd A(m_used, 3);
    Eigen::VectorXd y(m_used);
    for (int t = 2; t < n; ++t) {
        A(t - 2, 0) = 1.0;
        A(t - 2, 1) = series.values(t - 1);
        A(t - 2, 2) = series.values(t - 2);
        y(t - 2) = series.values(t);
    }
    Eigen::Vector3d beta = (A.transpose() * A).ldlt().solve(A.transpose() * y);
    double rss = (y - A * beta).squaredNorm();

    Ar2Model m;
    m.mu = beta(0);
    m.rho1 = beta(1);
    m.rho2 = beta(2);
    m.sigma = std::sqrt(std::max(0.0, rss) / std::max(1, m_used - 3));
    m.last_two_obs = {std::pair{series.years[static_cast<std::size_t>(n - 2)], series.values(n - 2)},
                      std::pair{series.years[static_cast<std::size_t>(n - 1)], series.values(n - 1)}};
    m.stationary = ar_polynomial_stationary({{1, m.rho1}, {2, m.rho2}});
    m.loglik = gaussian_ml_loglik(rss, m_used);
    m.n_obs = n;
    return m;
}

double tobit_loglik(const YearlySeries& series, double beta0, double beta1, double sigma) {
    const int n = static_cast<int>(series.values.size());
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
        double mu = beta0 + beta1 * i;
        double y = series.values(i);
        if (y <= 0.0)
            ll += log_norm_cdf(-mu / sigma);
        else if (y >= 1.0)
            ll += log_norm_cdf((mu - 1.0) / sigma);
        else
            ll += log_norm_pdf((y - mu) / sigma) - std::log(sigma);
    }
    return ll;
}

Eigen::Vector3d tobit_loglik_gradient(const YearlySeries& series, double beta0, double beta1,
                                      double sigma) {
    const int n = static_cast<int>(series.values.size());
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    auto mills = [](double z) { return std::exp(log_norm_pdf(z) - log_norm_cdf(z)); };
    for (int i = 0; i < n; ++i) {
        double t = static_cast<double>(i);
        double mu = beta0 + beta1 * t;
        double y = series.values(i);
        if (y <= 0.0) {
            double z = -mu / sigma;
            double lam = mills(z);
            g(0) += -lam / sigma;
            g(1) += -lam * t / sigma;
            g(2) += -lam * z;
        } else if (y >= 1.0) {
            double w = (mu - 1.0) / sigma;
            double lam = mills(w);
            g(0) += lam / sigma;
            g(1) += lam * t / sigma;
            g(2) += -lam * w;
        } else {
            double r = (y - mu) / sigma;
            g(0) += r / sigma;
            g(1) += r * t / sigma;
            g(2) += r * r - 1.0;
        }
    }
    return g;
}

TobitModel fit_tobit(const YearlySeries& input) {
    check_years(input);
    const int n = static_cast<int>(input.values.size());
    if (n < 4) throw Error::input("TooFewObservations", "Tobit fit needs at least 4 observations");

    // Clamp values within 1e-12 of the bounds; anything further outside
    // [0, 1] is not a share.
    YearlySeries series = input;
    int n_censored = 0;
    for (int i = 0; i < n; ++i) {
        double v = series.values(i);
        if (v < -1e-12 || v > 1.0 + 1e-12)
            throw Error::input("InvalidVariable", "Tobit input outside [0,1]: " + std::to_string(v));
        if (v <= 1e-12) {
            series.values(i) = 0.0;
            ++n_censored;
        } else if (v >= 1.0 - 1e-12) {
            series.values(i) = 1.0;
            ++n_censored;
        }
    }
    if (n_censored == n)
        throw Error::input("DegenerateAllCensored", "every observation sits on a bound");

    // Start from the clamped-OLS trend; with no censoring this is already
    // the maximum-likelihood point.
    Eigen::MatrixXd A(n, 2);
    for (int i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = static_cast<double>(i);
    }
    Eigen::Vector2d ols = (A.transpose() * A).ldlt().solve(A.transpose() * series.values);
    double rss = (series.values - A * ols).squaredNorm();
    double sigma0 = std::sqrt(std::max(rss / n, 1e-8));

    Eigen::Vector3d x(ols(0), ols(1), std::log(sigma0));
    auto eval = [&](const Eigen::Vector3d& p) {
        return tobit_loglik(series, p(0), p(1), std::exp(p(2)));
    };
    auto grad = [&](const Eigen::Vector3d& p) {
        return tobit_loglik_gradient(series, p(0), p(1), std::exp(p(2)));
    };

    double ll = eval(x);
    bool converged = false;
    for (int iter = 0; iter < 300; ++iter) {
        Eigen::Vector3d g = grad(x);
        if (g.norm() < 1e-8) {
            converged = true;
            break;
        }
        // Newton step with a finite-difference Hessian of the gradient.
        Eigen::Matrix3d H;
        for (int k = 0; k < 3; ++k) {
            double h = 1e-6 * std::max(1.0, std::abs(x(k)));
            Eigen::Vector3d xp = x, xm = x;
            xp(k) += h;
            xm(k) -= h;
            H.col(k) = (grad(xp) - grad(xm)) / (2.0 * h);
        }
        H = 0.5 * (H + H.transpose());
        Eigen::Vector3d step = -H.ldlt().solve(g);
        if (!step.allFinite() || step.dot(g) <= 0.0) step = g;  // ascent fallback

        double scale = 1.0;
        double ll_new = eval(x + scale * step);
        int halvings = 0;
        while (!(ll_new > ll - 1e-14) && halvings < 40) {
            scale *= 0.5;
            ll_new = eval(x + scale * step);
            ++halvings;
        }
        if (halvings == 40) {
            converged = g.norm() < 1e-6;
            break;
        }
        x += scale * step;
        double dll = ll_new - ll;
        ll = ll_new;
        if (std::abs(dll) < 1e-10 && grad(x).norm() < 1e-6) {
            converged = true;
            break;
        }
    }

    TobitModel m;
    m.beta0 = x(0);
    m.beta1 = x(1);
    m.sigma = std::exp(x(2));
    m.t0_year = series.years.front();
    m.last_obs = {series.years.back(), series.values(n - 1)};
    m.loglik = ll;
    m.n_obs = n;
    m.n_censored = n_censored;
    m.converged = converged;
    return m;
}

std::string model_name(const ForecastModel& m) {
    if (std::holds_alternative<TrendModel>(m)) return "trend";
    if (std::holds_alternative<Ar2Model>(m)) return "ar2";
    return "tobit";
}

double model_loglik(const ForecastModel& m) {
    return std::visit([](const auto& v) { return v.loglik; }, m);
}

double model_aic(const ForecastModel& m) {
    return std::visit([](const auto& v) { return aic(v.loglik, v.n_params); }, m);
}

ModelSelection select_model(const std::vector<ForecastModel>& candidates) {
    if (candidates.empty()) throw Error::input("InvalidArgument", "no candidate models");
    ModelSelection sel;
    sel.chosen = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& m = candidates[i];
        int k = std::visit([](const auto& v) { return v.n_params; }, m);
        double a = model_aic(m);
        sel.table.push_back({model_name(m), k, model_loglik(m), a});
        if (a < best) {
            best = a;
            sel.chosen = i;
        }
    }
    return sel;
}

YearlySeries yearly_series(const PanelDataset& ds, const std::string& variable,
                           const std::string& country) {
    if (ds.frequency() != Frequency::Yearly)
        throw Error::input("InvalidArgument", "yearly_series needs a yearly panel");
    YearlySeries s;
    s.values = ds.series(variable, country);
    for (const auto& p : ds.time_index()) s.years.push_back(p.year);
    for (int i = 0; i < s.values.size(); ++i)
        if (PanelDataset::is_missing(s.values(i)))
            throw Error::input("MissingInput", "series '" + variable + "'/" + country +
                                                   " has a missing year");
    return s;
}

PooledGrowthModel make_growth_model(const FitResult& fit, const PanelDataset& ds,
                                    const std::string& dependent) {
    if (fit.spec.regressors.size() != 2)
        throw Error::input("InvalidArgument", "growth model expects exactly 2 driver variables");
    PooledGrowthModel m;
    const std::string prefix = "dlog_";
    for (std::size_t i = 0; i < 2; ++i) {
        std::string name = fit.spec.regressors[i].first;
        if (name.rfind(prefix, 0) == 0) name = name.substr(prefix.size());
        m.drivers[i] = name;
    }
    const auto& levels = ds.values(dependent);
    const int T = ds.n_periods();
    for (std::size_t j = 0; j < fit.countries.size(); ++j) {
        const auto& c = fit.countries[j];
        CountryGrowth g;
        g.beta0 = fit.coefficient("const");
        if (j > 0) g.beta0 += fit.coefficient("fe", c);
        g.beta1 = fit.coefficient(fit.spec.regressors[0].first, c);
        g.beta2 = fit.coefficient(fit.spec.regressors[1].first, c);
        auto it = fit.details.find("sigma[" + c + "]");
        if (it == fit.details.end())
            throw Error::input("InvalidArgument", "fit has no innovation sd for " + c);
        g.sigma = it->second;
        m.by_country[c] = g;
        m.start_levels[c] = {levels(T - 1, static_cast<int>(ds.country_index(c))),
                             ds.time_index().back().year};
    }
    return m;
}

}  // namespace cepkit
