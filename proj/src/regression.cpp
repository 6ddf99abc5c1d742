#include "cepkit/regression.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <set>

#include "cepkit/errors.hpp"
#include "cepkit/synth.hpp"

namespace cepkit {

int ArmaLags::max_ar() const { return ar.empty() ? 0 : *std::max_element(ar.begin(), ar.end()); }
int ArmaLags::max_ma() const { return ma.empty() ? 0 : *std::max_element(ma.begin(), ma.end()); }

std::vector<std::string> ModelSpec::used_variables() const {
    std::vector<std::string> vars{dependent};
    for (const auto& [name, _] : regressors) vars.push_back(name);
    for (const auto& name : dummies) vars.push_back(name);
    return vars;
}

void ModelSpec::validate(const PanelDataset& ds) const {
    std::set<std::string> seen;
    for (const auto& v : used_variables()) {
        if (!ds.has_variable(v))
            throw Error::input("UnknownVariable", "model uses '" + v + "' which is not in the dataset");
        if (v != dependent && !seen.insert(v).second)
            throw Error::input("InvalidModelSpec", "variable '" + v + "' listed twice");
    }
    for (int l : arma.ar)
        if (l < 1) throw Error::input("InvalidModelSpec", "AR lag must be a positive integer");
    for (int l : arma.ma)
        if (l < 1) throw Error::input("InvalidModelSpec", "MA lag must be a positive integer");
    if (std::set<int>(arma.ar.begin(), arma.ar.end()).size() != arma.ar.size() ||
        std::set<int>(arma.ma.begin(), arma.ma.end()).size() != arma.ma.size())
        throw Error::input("InvalidModelSpec", "duplicate ARMA lag");
    if (std::max(arma.max_ar(), arma.max_ma()) >= ds.n_periods())
        throw Error::input("InvalidModelSpec", "ARMA lag exceeds sample length");
    if (seasonal_effects && ds.frequency() == Frequency::Yearly)
        throw Error::input("InvalidModelSpec", "seasonal effects need monthly or biannual data");
}

std::optional<int> FitResult::find(const std::string& regressor, const std::string& country) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i].regressor == regressor && names[i].country == country)
            return static_cast<int>(i);
    return std::nullopt;
}

double FitResult::coefficient(const std::string& regressor, const std::string& country) const {
    auto i = find(regressor, country);
    if (!i)
        throw Error::input("UnknownVariable",
                           "no coefficient " + CoefKey{regressor, country}.label() + " in fit");
    return beta(*i);
}

double FitResult::std_error(const std::string& regressor, const std::string& country) const {
    auto i = find(regressor, country);
    if (!i)
        throw Error::input("UnknownVariable",
                           "no coefficient " + CoefKey{regressor, country}.label() + " in fit");
    return std::sqrt(std::max(0.0, covariance(*i, *i)));
}

bool FitResult::has_flag(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

namespace {

struct Design {
    std::vector<CoefKey> labels;
    std::vector<Eigen::MatrixXd> X;  // per country, T x K
    Eigen::MatrixXd Y;               // T x J
    std::vector<Period> sample;
    std::vector<std::string> countries;

    int K() const { return static_cast<int>(labels.size()); }
    int T() const { return static_cast<int>(Y.rows()); }
    int J() const { return static_cast<int>(Y.cols()); }
};

/// First row from which every used variable is complete in every country.
/// Interior gaps after that row are rejected: the estimators require a
/// balanced (listwise complete) sample.
int effective_start(const PanelDataset& ds, const std::vector<std::string>& vars) {
    int t0 = 0;
    for (const auto& v : vars) {
        const auto& m = ds.values(v);
        for (int t = ds.n_periods() - 1; t >= 0; --t) {
            bool any_missing = false;
            for (int j = 0; j < ds.n_countries(); ++j)
                if (PanelDataset::is_missing(m(t, j))) {
                    any_missing = true;
                    break;
                }
            if (any_missing) {
                t0 = std::max(t0, t + 1);
                break;
            }
        }
    }
    for (const auto& v : vars) {
        const auto& m = ds.values(v);
        for (int t = t0; t < ds.n_periods(); ++t)
            for (int j = 0; j < ds.n_countries(); ++j)
                if (PanelDataset::is_missing(m(t, j)))
                    throw Error::input("MissingInput",
                                       "missing cell in '" + v + "' at " +
                                           ds.time_index()[static_cast<std::size_t>(t)].label() + "/" +
                                           ds.countries()[static_cast<std::size_t>(j)] +
                                           " inside the estimation sample");
    }
    if (t0 >= ds.n_periods())
        throw Error::input("InsufficientObservations", "no complete periods for the used variables");
    return t0;
}

Design build_design(const PanelDataset& ds, const ModelSpec& spec) {
    const int J = ds.n_countries();
    int t0 = effective_start(ds, spec.used_variables());
    const int T = ds.n_periods() - t0;

    Design d;
    d.countries = ds.countries();
    d.sample.assign(ds.time_index().begin() + t0, ds.time_index().end());

    for (const auto& [name, scope] : spec.regressors) {
        if (scope == SlopeScope::PerCountry)
            for (int j = 0; j < J; ++j) d.labels.push_back({name, ds.countries()[static_cast<std::size_t>(j)]});
        else
            d.labels.push_back({name, ""});
    }
    for (const auto& name : spec.dummies) d.labels.push_back({name, ""});
    if (spec.country_effects) {
        d.labels.push_back({"const", ""});
        for (int j = 1; j < J; ++j) d.labels.push_back({"fe", ds.countries()[static_cast<std::size_t>(j)]});
    }
    int ppy = periods_per_year(ds.frequency());
    if (spec.seasonal_effects)
        for (int s = 2; s <= ppy; ++s) d.labels.push_back({"season_" + std::to_string(s), ""});
    if (d.labels.empty()) throw Error::input("InvalidModelSpec", "model has no columns");

    const int K = d.K();
    d.Y.resize(T, J);
    d.X.assign(static_cast<std::size_t>(J), Eigen::MatrixXd::Zero(T, K));

    const auto& dep = ds.values(spec.dependent);
    for (int j = 0; j < J; ++j) d.Y.col(j) = dep.col(j).segment(t0, T);

    int col = 0;
    for (const auto& [name, scope] : spec.regressors) {
        const auto& m = ds.values(name);
        if (scope == SlopeScope::PerCountry) {
            for (int j = 0; j < J; ++j) {
                d.X[static_cast<std::size_t>(j)].col(col + j) = m.col(j).segment(t0, T);
            }
            col += J;
        } else {
            for (int j = 0; j < J; ++j)
                d.X[static_cast<std::size_t>(j)].col(col) = m.col(j).segment(t0, T);
            ++col;
        }
    }
    for (const auto& name : spec.dummies) {
        const auto& m = ds.values(name);
        for (int j = 0; j < J; ++j) d.X[static_cast<std::size_t>(j)].col(col) = m.col(j).segment(t0, T);
        ++col;
    }
    if (spec.country_effects) {
        for (int j = 0; j < J; ++j) d.X[static_cast<std::size_t>(j)].col(col).setOnes();
        ++col;
        for (int j = 1; j < J; ++j) {
            d.X[static_cast<std::size_t>(j)].col(col).setOnes();
            ++col;
        }
    }
    if (spec.seasonal_effects) {
        for (int s = 2; s <= ppy; ++s) {
            for (int t = 0; t < T; ++t)
                if (d.sample[static_cast<std::size_t>(t)].sub == s)
                    for (int j = 0; j < J; ++j) d.X[static_cast<std::size_t>(j)](t, col) = 1.0;
            ++col;
        }
    }
    return d;
}

struct StackedSolve {
    Eigen::VectorXd beta;
    Eigen::MatrixXd xtx_inv;
    double rss = 0.0;
};

StackedSolve solve_stacked(const Design& d) {
    const int n = d.T() * d.J();
    const int K = d.K();
    if (n <= K)
        throw Error::input("InsufficientObservations",
                           std::to_string(n) + " observations for " + std::to_string(K) + " coefficients");
    Eigen::MatrixXd A(n, K);
    Eigen::VectorXd b(n);
    for (int j = 0; j < d.J(); ++j) {
        A.middleRows(j * d.T(), d.T()) = d.X[static_cast<std::size_t>(j)];
        b.segment(j * d.T(), d.T()) = d.Y.col(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < K) {
        const auto& perm = qr.colsPermutation().indices();
        std::string cols;
        for (int i = qr.rank(); i < K; ++i) {
            if (!cols.empty()) cols += ", ";
            cols += d.labels[static_cast<std::size_t>(perm(i))].label();
        }
        throw Error::numerical("RankDeficientDesign", "collinear columns: " + cols);
    }
    StackedSolve s;
    s.beta = qr.solve(b);
    s.rss = (b - A * s.beta).squaredNorm();
    Eigen::MatrixXd xtx = A.transpose() * A;
    s.xtx_inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(K, K));
    return s;
}

Eigen::MatrixXd residual_panel(const Design& d, const Eigen::VectorXd& beta) {
    Eigen::MatrixXd e(d.T(), d.J());
    for (int j = 0; j < d.J(); ++j)
        e.col(j) = d.Y.col(j) - d.X[static_cast<std::size_t>(j)] * beta;
    return e;
}

/// Quasi-difference a design by the AR filter phi(B): rows t >= p get
/// z_t - sum_i phi_i z_{t-lag_i}; the first p rows are dropped.
/// `phi` has one column per country (identical columns when pooled).
Design ar_filter(const Design& d, const std::vector<int>& lags, const Eigen::MatrixXd& phi) {
    if (lags.empty()) return d;
    int p = *std::max_element(lags.begin(), lags.end());
    if (d.T() - p <= 0)
        throw Error::input("InsufficientObservations", "AR filter consumes the whole sample");
    Design out;
    out.labels = d.labels;
    out.countries = d.countries;
    out.sample.assign(d.sample.begin() + p, d.sample.end());
    const int T = d.T() - p;
    out.Y.resize(T, d.J());
    out.X.assign(static_cast<std::size_t>(d.J()), Eigen::MatrixXd(T, d.K()));
    for (int j = 0; j < d.J(); ++j) {
        out.Y.col(j) = d.Y.col(j).segment(p, T);
        out.X[static_cast<std::size_t>(j)] = d.X[static_cast<std::size_t>(j)].middleRows(p, T);
        for (std::size_t i = 0; i < lags.size(); ++i) {
            int l = lags[i];
            double ph = phi(static_cast<int>(i), j);
            out.Y.col(j) -= ph * d.Y.col(j).segment(p - l, T);
            out.X[static_cast<std::size_t>(j)] -= ph * d.X[static_cast<std::size_t>(j)].middleRows(p - l, T);
        }
    }
    return out;
}

/// Rotate the country dimension by inv(L) where sigma = L L'. Whitens
/// contemporaneous cross-country correlation under the SUR weighting.
Design sur_transform(const Design& d, const Eigen::MatrixXd& chol_lower) {
    Design out = d;
    auto solve_rows = [&](const Eigen::MatrixXd& m) {
        // m is T x J; returns m * inv(L)'
        return chol_lower.triangularView<Eigen::Lower>().solve(m.transpose()).transpose().eval();
    };
    out.Y = solve_rows(d.Y);
    Eigen::MatrixXd buf(d.T(), d.J());
    for (int c = 0; c < d.K(); ++c) {
        for (int j = 0; j < d.J(); ++j) buf.col(j) = d.X[static_cast<std::size_t>(j)].col(c);
        Eigen::MatrixXd tbuf = solve_rows(buf);
        for (int j = 0; j < d.J(); ++j) out.X[static_cast<std::size_t>(j)].col(c) = tbuf.col(j);
    }
    return out;
}

struct ArmaFit {
    std::vector<int> ar_lags, ma_lags;
    Eigen::MatrixXd phi;    // n_ar x J (pooled: identical columns)
    Eigen::MatrixXd theta;  // n_ma x J
    Eigen::MatrixXd cov;    // per parameter block, pooled layout (n_ar+n_ma) or per-country stacked
    bool per_country = false;
};

/// Innovations eps from residual panel via the full ARMA recursion with
/// zero pre-sample values; rows cover t in [max AR lag, T).
Eigen::MatrixXd arma_innovations(const Eigen::MatrixXd& eta, const ArmaFit& f) {
    const int T = static_cast<int>(eta.rows());
    const int J = static_cast<int>(eta.cols());
    int p = f.ar_lags.empty() ? 0 : *std::max_element(f.ar_lags.begin(), f.ar_lags.end());
    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(T, J);
    for (int j = 0; j < J; ++j)
        for (int t = p; t < T; ++t) {
            double v = eta(t, j);
            for (std::size_t i = 0; i < f.ar_lags.size(); ++i)
                v -= f.phi(static_cast<int>(i), j) * eta(t - f.ar_lags[i], j);
            for (std::size_t i = 0; i < f.ma_lags.size(); ++i) {
                int tm = t - f.ma_lags[i];
                if (tm >= p) v += f.theta(static_cast<int>(i), j) * eps(tm, j);
            }
            eps(t, j) = v;
        }
    return eps.bottomRows(T - p);
}

/// Conditional-least-squares ARMA fit on a residual panel. Linear solve
/// for pure AR; Gauss-Newton on the innovation recursion when MA terms
/// are present. Zero pre-sample residuals throughout.
ArmaFit fit_arma_cls(const Eigen::MatrixXd& eta, const ArmaLags& lags, SlopeScope scope) {
    ArmaFit f;
    f.ar_lags = lags.ar;
    f.ma_lags = lags.ma;
    std::sort(f.ar_lags.begin(), f.ar_lags.end());
    std::sort(f.ma_lags.begin(), f.ma_lags.end());
    f.per_country = scope == SlopeScope::PerCountry;
    const int T = static_cast<int>(eta.rows());
    const int J = static_cast<int>(eta.cols());
    const int na = static_cast<int>(f.ar_lags.size());
    const int nm = static_cast<int>(f.ma_lags.size());
    const int p = na ? f.ar_lags.back() : 0;
    if (T - p < na + nm + 1)
        throw Error::input("InsufficientObservations", "residual series too short for the ARMA lags");
    f.phi.resize(na, J);
    f.theta.resize(nm, J);

    auto fit_group = [&](const std::vector<int>& cols, Eigen::VectorXd& psi, Eigen::MatrixXd& cov) {
        const int rows_per = T - p;
        const int n = rows_per * static_cast<int>(cols.size());
        // AR part by linear least squares.
        Eigen::MatrixXd Z(n, na);
        Eigen::VectorXd y(n);
        int r = 0;
        for (int j : cols)
            for (int t = p; t < T; ++t, ++r) {
                y(r) = eta(t, j);
                for (int i = 0; i < na; ++i) Z(r, i) = eta(t - f.ar_lags[static_cast<std::size_t>(i)], j);
            }
        psi = Eigen::VectorXd::Zero(na + nm);
        if (na > 0) psi.head(na) = (Z.transpose() * Z).ldlt().solve(Z.transpose() * y);

        // Gauss-Newton refinement over (phi, theta) when MA terms exist.
        auto recurse = [&](const Eigen::VectorXd& params, Eigen::VectorXd& eps_out,
                           Eigen::MatrixXd* grad_out) {
            eps_out.resize(n);
            if (grad_out) grad_out->setZero(n, na + nm);
            int row = 0;
            std::vector<double> eps_hist(static_cast<std::size_t>(T), 0.0);
            Eigen::MatrixXd dhist(T, na + nm);
            for (int j : cols) {
                std::fill(eps_hist.begin(), eps_hist.end(), 0.0);
                dhist.setZero();
                for (int t = p; t < T; ++t, ++row) {
                    double v = eta(t, j);
                    for (int i = 0; i < na; ++i) v -= params(i) * eta(t - f.ar_lags[static_cast<std::size_t>(i)], j);
                    for (int i = 0; i < nm; ++i) {
                        int tm = t - f.ma_lags[static_cast<std::size_t>(i)];
                        if (tm >= p) v += params(na + i) * eps_hist[static_cast<std::size_t>(tm)];
                    }
                    eps_hist[static_cast<std::size_t>(t)] = v;
                    eps_out(row) = v;
                    if (grad_out) {
                        for (int k = 0; k < na + nm; ++k) {
                            double g = 0.0;
                            if (k < na) g = -eta(t - f.ar_lags[static_cast<std::size_t>(k)], j);
                            else {
                                int tm = t - f.ma_lags[static_cast<std::size_t>(k - na)];
                                if (tm >= p) g = eps_hist[static_cast<std::size_t>(tm)];
                            }
                            for (int i = 0; i < nm; ++i) {
                                int tm = t - f.ma_lags[static_cast<std::size_t>(i)];
                                if (tm >= p) g += params(na + i) * dhist(tm, k);
                            }
                            dhist(t, k) = g;
                            (*grad_out)(row, k) = g;
                        }
                    }
                }
            }
            return eps_out.squaredNorm();
        };

        Eigen::VectorXd eps(n);
        Eigen::MatrixXd G(n, na + nm);
        if (nm > 0) {
            double rss = recurse(psi, eps, &G);
            for (int it = 0; it < 100; ++it) {
                Eigen::VectorXd step = (G.transpose() * G)
                                           .ldlt()
                                           .solve(G.transpose() * eps);
                // eps is linearized as eps + G*d; minimize => d = -(G'G)^-1 G'eps
                Eigen::VectorXd trial = psi - step;
                Eigen::VectorXd eps2(n);
                double rss2 = recurse(trial, eps2, nullptr);
                double damp = 1.0;
                while (rss2 > rss && damp > 1e-6) {
                    damp *= 0.5;
                    trial = psi - damp * step;
                    rss2 = recurse(trial, eps2, nullptr);
                }
                double change = (trial - psi).cwiseAbs().maxCoeff();
                psi = trial;
                rss = rss2;
                if (change < 1e-12) break;
            }
            recurse(psi, eps, &G);
        } else {
            recurse(psi, eps, nullptr);
            G = Z;
        }
        double dof = std::max(1, n - (na + nm));
        double s2 = eps.squaredNorm() / dof;
        if (na + nm > 0)
            cov = s2 * (G.transpose() * G).ldlt().solve(Eigen::MatrixXd::Identity(na + nm, na + nm));
        else
            cov.resize(0, 0);
    };

    if (f.per_country) {
        f.cov.setZero(J * (na + nm), J * (na + nm));
        for (int j = 0; j < J; ++j) {
            Eigen::VectorXd psi;
            Eigen::MatrixXd cov;
            fit_group({j}, psi, cov);
            for (int i = 0; i < na; ++i) f.phi(i, j) = psi(i);
            for (int i = 0; i < nm; ++i) f.theta(i, j) = psi(na + i);
            if (na + nm > 0) f.cov.block(j * (na + nm), j * (na + nm), na + nm, na + nm) = cov;
        }
    } else {
        std::vector<int> all(static_cast<std::size_t>(J));
        for (int j = 0; j < J; ++j) all[static_cast<std::size_t>(j)] = j;
        Eigen::VectorXd psi;
        fit_group(all, psi, f.cov);
        for (int j = 0; j < J; ++j) {
            for (int i = 0; i < na; ++i) f.phi(i, j) = psi(i);
            for (int i = 0; i < nm; ++i) f.theta(i, j) = psi(na + i);
        }
    }
    return f;
}

void check_ar_stationary(const ArmaFit& f) {
    const int J = static_cast<int>(f.phi.cols());
    for (int j = 0; j < J; ++j) {
        std::vector<std::pair<int, double>> poly;
        for (std::size_t i = 0; i < f.ar_lags.size(); ++i)
            poly.emplace_back(f.ar_lags[i], f.phi(static_cast<int>(i), j));
        if (!ar_polynomial_stationary(poly))
            throw Error::numerical("NonStationaryArEstimate",
                                   "estimated AR polynomial has roots on or inside the unit circle");
        if (f.per_country == false) break;  // pooled: same coefficients in every column
    }
}

double pooled_durbin_watson(const Eigen::MatrixXd& e) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < e.cols(); ++j) {
        for (int t = 1; t < e.rows(); ++t) {
            double d = e(t, j) - e(t - 1, j);
            num += d * d;
        }
        den += e.col(j).squaredNorm();
    }
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

Eigen::MatrixXd cross_section_cov(const Eigen::MatrixXd& e) {
    return (e.transpose() * e) / static_cast<double>(e.rows());
}

/// Beck-Katz sandwich: (X'X)^-1 [ sum_jk Sigma_jk X_j' X_k ] (X'X)^-1
/// around the final-stage design.
Eigen::MatrixXd pcse_covariance(const Design& stage, const Eigen::MatrixXd& xtx_inv,
                                const Eigen::MatrixXd& sigma) {
    const int K = stage.K();
    Eigen::MatrixXd middle = Eigen::MatrixXd::Zero(K, K);
    for (int j = 0; j < stage.J(); ++j)
        for (int k = 0; k < stage.J(); ++k) {
            if (sigma(j, k) == 0.0) continue;
            middle.noalias() +=
                sigma(j, k) * (stage.X[static_cast<std::size_t>(j)].transpose() * stage.X[static_cast<std::size_t>(k)]);
        }
    return xtx_inv * middle * xtx_inv;
}

FitResult assemble_result(const ModelSpec& spec, const Design& d,
                          const Design& stage, const StackedSolve& stage_solve,
                          const Eigen::VectorXd& beta, const ArmaFit* arma, bool converged,
                          int iterations, std::vector<std::string> flags,
                          const Eigen::MatrixXd* sur_sigma) {
    FitResult r;
    r.spec = spec;
    r.countries = d.countries;
    r.sample = d.sample;
    r.converged = converged;
    r.iterations = iterations;
    r.flags = std::move(flags);

    const int J = d.J();
    const int K = d.K();
    int n_arma = 0;
    if (arma) {
        int per = static_cast<int>(arma->ar_lags.size() + arma->ma_lags.size());
        n_arma = arma->per_country ? per * J : per;
    }

    r.names = d.labels;
    r.beta.resize(K + n_arma);
    r.beta.head(K) = beta;

    r.residuals = residual_panel(d, beta);
    if (arma)
        r.innovations = arma_innovations(r.residuals, *arma);
    else
        r.innovations = r.residuals;
    r.sigma_cross = sur_sigma ? *sur_sigma : cross_section_cov(r.innovations);

    // Covariance: regression block from the final stage, ARMA block from
    // its conditional LS fit; cross terms zero.
    r.covariance.setZero(K + n_arma, K + n_arma);
    const Eigen::MatrixXd stage_resid = residual_panel(stage, beta);
    const int n_stage = stage.T() * J;
    r.n_obs = d.T() * J;
    r.n_params = K + n_arma;
    if (spec.covariance == CovarianceType::PCSE) {
        Eigen::MatrixXd sig_stage = cross_section_cov(stage_resid);
        r.covariance.topLeftCorner(K, K) = pcse_covariance(stage, stage_solve.xtx_inv, sig_stage);
    } else {
        double dof = std::max(1, n_stage - r.n_params);
        double s2 = stage_resid.squaredNorm() / dof;
        r.covariance.topLeftCorner(K, K) = s2 * stage_solve.xtx_inv;
        r.details["s2"] = s2;
    }
    if (arma && n_arma > 0) {
        if (arma->per_country) {
            for (int j = 0; j < J; ++j) {
                for (std::size_t i = 0; i < arma->ar_lags.size(); ++i)
                    r.names.push_back({"ar_" + std::to_string(arma->ar_lags[i]), d.countries[static_cast<std::size_t>(j)]});
                for (std::size_t i = 0; i < arma->ma_lags.size(); ++i)
                    r.names.push_back({"ma_" + std::to_string(arma->ma_lags[i]), d.countries[static_cast<std::size_t>(j)]});
            }
            int per = static_cast<int>(arma->ar_lags.size() + arma->ma_lags.size());
            for (int j = 0; j < J; ++j) {
                for (std::size_t i = 0; i < arma->ar_lags.size(); ++i)
                    r.beta(K + j * per + static_cast<int>(i)) = arma->phi(static_cast<int>(i), j);
                for (std::size_t i = 0; i < arma->ma_lags.size(); ++i)
                    r.beta(K + j * per + static_cast<int>(arma->ar_lags.size() + i)) =
                        arma->theta(static_cast<int>(i), j);
            }
        } else {
            for (std::size_t i = 0; i < arma->ar_lags.size(); ++i)
                r.names.push_back({"ar_" + std::to_string(arma->ar_lags[i]), ""});
            for (std::size_t i = 0; i < arma->ma_lags.size(); ++i)
                r.names.push_back({"ma_" + std::to_string(arma->ma_lags[i]), ""});
            for (std::size_t i = 0; i < arma->ar_lags.size(); ++i)
                r.beta(K + static_cast<int>(i)) = arma->phi(static_cast<int>(i), 0);
            for (std::size_t i = 0; i < arma->ma_lags.size(); ++i)
                r.beta(K + static_cast<int>(arma->ar_lags.size() + i)) = arma->theta(static_cast<int>(i), 0);
        }
        r.covariance.bottomRightCorner(n_arma, n_arma) = arma->cov;
    }

    // Fit statistics. R-squared on the original scale; log-likelihood and
    // DW on innovations with per-country innovation variances.
    double tss = (d.Y.array() - d.Y.mean()).square().sum();
    double rss = r.residuals.squaredNorm();
    r.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
    int n = r.n_obs;
    if (n > r.n_params + 1)
        r.r2_adjusted = 1.0 - (1.0 - r.r2) * (n - 1) / static_cast<double>(n - r.n_params);
    else
        r.r2_adjusted = r.r2;

    const int t_inn = static_cast<int>(r.innovations.rows());
    double ll = 0.0;
    for (int j = 0; j < J; ++j) {
        double s2 = r.innovations.col(j).squaredNorm() / std::max(1, t_inn);
        s2 = std::max(s2, 1e-300);
        ll += -0.5 * t_inn * (std::log(2.0 * M_PI * s2) + 1.0);
    }
    r.loglik = ll;
    r.dw = pooled_durbin_watson(r.innovations);
    if (std::isnan(r.dw)) r.flags.push_back("ZeroResiduals");
    return r;
}

}  // namespace

FitResult fit_panel(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts) {
    spec.validate(ds);
    Design d = build_design(ds, spec);
    const bool use_sur = spec.weighting == Weighting::CrossSectionSUR;
    const bool use_arma = !spec.arma.empty();
    const int J = d.J();

    StackedSolve sol = solve_stacked(d);
    Eigen::VectorXd beta = sol.beta;

    if (!use_sur && !use_arma)
        return assemble_result(spec, d, d, sol, beta, nullptr, true, 0, {}, nullptr);

    ArmaFit arma;
    bool have_arma = false;
    Eigen::MatrixXd sur_sigma;
    bool have_sigma = false;
    Design stage = d;
    StackedSolve stage_solve = sol;
    bool converged = false;
    int iters = 0;
    std::vector<std::string> flags;
    std::vector<double> deltas;
    Eigen::VectorXd prev_arma;

    const int max_iter = opts.two_step ? 1 : opts.max_iter;
    for (iters = 1; iters <= max_iter; ++iters) {
        Eigen::MatrixXd eta = residual_panel(d, beta);
        Design cur = d;
        double arma_delta = 0.0;
        if (use_arma) {
            ArmaFit next = fit_arma_cls(eta, spec.arma, spec.arma_scope);
            check_ar_stationary(next);
            Eigen::VectorXd flat(next.phi.size() + next.theta.size());
            flat << Eigen::Map<const Eigen::VectorXd>(next.phi.data(), next.phi.size()),
                Eigen::Map<const Eigen::VectorXd>(next.theta.data(), next.theta.size());
            if (have_arma && prev_arma.size() == flat.size())
                arma_delta = (flat - prev_arma).cwiseAbs().maxCoeff();
            prev_arma = flat;
            arma = std::move(next);
            have_arma = true;
            cur = ar_filter(cur, arma.ar_lags, arma.phi);
        }
        if (use_sur) {
            Eigen::MatrixXd e_star = residual_panel(cur, beta);
            if (cur.T() <= J)
                throw Error::numerical("SingularSigma",
                                       "cross-section covariance needs more periods than countries (T=" +
                                           std::to_string(cur.T()) + ", J=" + std::to_string(J) + ")");
            Eigen::MatrixXd sig = cross_section_cov(e_star);
            Eigen::LLT<Eigen::MatrixXd> llt(sig);
            if (llt.info() != Eigen::Success) {
                // Iterated FGLS can drive the residual covariance toward
                // singularity when T barely exceeds J. Keep the last
                // estimable iterate rather than discarding the fit; the
                // two-step option avoids this path entirely.
                if (!have_sigma)
                    throw Error::numerical("SingularSigma",
                                           "estimated cross-section covariance is not invertible");
                flags.push_back("SigmaCollapsed");
                --iters;
                break;
            }
            sur_sigma = sig;
            have_sigma = true;
            cur = sur_transform(cur, llt.matrixL());
        }
        StackedSolve s2 = solve_stacked(cur);
        double delta = (s2.beta - beta).cwiseAbs().maxCoeff();
        delta = std::max(delta, arma_delta);
        beta = s2.beta;
        stage = std::move(cur);
        stage_solve = std::move(s2);
        deltas.push_back(delta);
        if (delta < opts.tol && (iters > 1 || !use_arma || opts.two_step)) {
            converged = true;
            break;
        }
    }
    if (opts.two_step) {
        converged = true;
        flags.push_back("two_step");
    }
    if (!converged) flags.push_back("NoConvergence");
    for (std::size_t i = 2; i < deltas.size(); ++i)
        if (deltas[i] > deltas[i - 1]) {
            flags.push_back("fgls_nonmonotone");
            break;
        }

    FitResult r = assemble_result(spec, d, stage, stage_solve, beta,
                                  have_arma ? &arma : nullptr, converged, iters,
                                  std::move(flags), have_sigma ? &sur_sigma : nullptr);
    if (!deltas.empty()) r.details["fgls_delta_final"] = deltas.back();
    return r;
}

FitResult fit_ols(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts) {
    if (spec.weighting != Weighting::None || !spec.arma.empty())
        throw Error::input("InvalidModelSpec", "fit_ols requires weighting=None and no ARMA lags");
    return fit_panel(ds, spec, opts);
}

FitResult fit_fgls_sur(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts) {
    if (spec.weighting != Weighting::CrossSectionSUR)
        throw Error::input("InvalidModelSpec", "fit_fgls_sur requires weighting=CrossSectionSUR");
    return fit_panel(ds, spec, opts);
}

FitResult fit_arma_errors(const PanelDataset& ds, const ModelSpec& spec, const FitOptions& opts) {
    return fit_panel(ds, spec, opts);
}

FitResult fit_random_effects(const PanelDataset& ds, const ModelSpec& spec, const FitOptions&) {
    for (const auto& [name, scope] : spec.regressors)
        if (scope != SlopeScope::Pooled)
            throw Error::input("InvalidModelSpec",
                               "random effects requires pooled slopes ('" + name + "' is per-country)");
    if (!spec.arma.empty())
        throw Error::input("InvalidModelSpec", "random effects does not support ARMA errors");
    ModelSpec pooled = spec;
    pooled.country_effects = false;
    pooled.weighting = Weighting::None;
    pooled.validate(ds);

    Design d = build_design(ds, pooled);
    const int T = d.T();
    const int J = d.J();
    const int k = d.K();
    if (T < 2) throw Error::input("InsufficientObservations", "random effects needs T >= 2");

    std::vector<std::string> flags;

    // Within (fixed-effects) stage: demean per country.
    Eigen::MatrixXd A_w(T * J, k);
    Eigen::VectorXd b_w(T * J);
    Eigen::MatrixXd xbar(J, k);
    Eigen::VectorXd ybar(J);
    for (int j = 0; j < J; ++j) {
        const auto& Xj = d.X[static_cast<std::size_t>(j)];
        xbar.row(j) = Xj.colwise().mean();
        ybar(j) = d.Y.col(j).mean();
        A_w.middleRows(j * T, T) = Xj.rowwise() - xbar.row(j);
        b_w.segment(j * T, T) = d.Y.col(j).array() - ybar(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_w(A_w);
    qr_w.setThreshold(1e-10);
    if (qr_w.rank() < k)
        throw Error::numerical("RankDeficientDesign", "within transformation leaves collinear columns");
    Eigen::VectorXd beta_w = qr_w.solve(b_w);
    double rss_w = (b_w - A_w * beta_w).squaredNorm();
    int dof_w = J * (T - 1) - k;
    if (dof_w < 1) throw Error::input("InsufficientObservations", "within regression has no degrees of freedom");
    double sigma2_e = rss_w / dof_w;

    // Between stage on country means.
    int dof_b = J - k - 1;
    if (dof_b < 1)
        throw Error::input("InsufficientObservations",
                           "between regression needs more countries than regressors");
    Eigen::MatrixXd A_b(J, k + 1);
    A_b.col(0).setOnes();
    A_b.rightCols(k) = xbar;
    Eigen::VectorXd beta_b = (A_b.transpose() * A_b).ldlt().solve(A_b.transpose() * ybar);
    double rss_b = (ybar - A_b * beta_b).squaredNorm();
    double sigma2_1 = rss_b / dof_b;
    double sigma2_alpha = sigma2_1 - sigma2_e / T;
    if (sigma2_alpha < 0.0) {
        sigma2_alpha = 0.0;
        flags.push_back("NegativeVarianceComponent");
    }
    double theta = 1.0 - std::sqrt(sigma2_e / (T * sigma2_alpha + sigma2_e));

    // Quasi-demeaned GLS.
    Eigen::MatrixXd A(T * J, k + 1);
    Eigen::VectorXd b(T * J);
    for (int j = 0; j < J; ++j) {
        const auto& Xj = d.X[static_cast<std::size_t>(j)];
        A.block(j * T, 0, T, 1).setConstant(1.0 - theta);
        A.block(j * T, 1, T, k) = Xj.rowwise() - theta * xbar.row(j);
        b.segment(j * T, T) = d.Y.col(j).array() - theta * ybar(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < k + 1)
        throw Error::numerical("RankDeficientDesign", "quasi-demeaned design is rank deficient");
    Eigen::VectorXd beta = qr.solve(b);
    double rss = (b - A * beta).squaredNorm();
    double s2 = rss / std::max(1, T * J - (k + 1));
    Eigen::MatrixXd xtx_inv =
        (A.transpose() * A).ldlt().solve(Eigen::MatrixXd::Identity(k + 1, k + 1));

    FitResult r;
    r.spec = spec;
    r.countries = d.countries;
    r.sample = d.sample;
    r.names.push_back({"const", ""});
    for (const auto& lbl : d.labels) r.names.push_back(lbl);
    r.beta = beta;
    r.covariance = s2 * xtx_inv;
    r.residuals.resize(T, J);
    for (int j = 0; j < J; ++j)
        r.residuals.col(j) = d.Y.col(j).array() - beta(0) -
                             (d.X[static_cast<std::size_t>(j)] * beta.tail(k)).array();
    r.innovations = r.residuals;
    r.sigma_cross = cross_section_cov(r.innovations);
    double tss = (d.Y.array() - d.Y.mean()).square().sum();
    r.r2 = tss > 0 ? 1.0 - r.residuals.squaredNorm() / tss : 1.0;
    r.n_obs = T * J;
    r.n_params = k + 1;
    r.r2_adjusted = 1.0 - (1.0 - r.r2) * (r.n_obs - 1) / static_cast<double>(r.n_obs - r.n_params);
    double ll = 0.0;
    for (int j = 0; j < J; ++j) {
        double s2j = std::max(r.innovations.col(j).squaredNorm() / T, 1e-300);
        ll += -0.5 * T * (std::log(2.0 * M_PI * s2j) + 1.0);
    }
    r.loglik = ll;
    r.dw = pooled_durbin_watson(r.innovations);
    r.flags = std::move(flags);
    r.details["s2"] = s2;
    r.details["theta"] = theta;
    r.details["sigma2_e"] = sigma2_e;
    r.details["sigma2_alpha"] = sigma2_alpha;
    return r;
}

FitResult fit_pooled_growth(const PanelDataset& ds, const std::string& dependent,
                            const std::vector<std::string>& regressors, const FitOptions& opts) {
    if (ds.frequency() != Frequency::Yearly)
        throw Error::input("InvalidModelSpec", "growth model needs a yearly panel");
    const int T = ds.n_periods();
    const int J = ds.n_countries();
    if (T < 5)
        throw Error::input("InsufficientObservations", "growth model needs at least 5 years");

    std::vector<std::string> vars{dependent};
    vars.insert(vars.end(), regressors.begin(), regressors.end());
    for (const auto& v : vars) {
        const auto& m = ds.values(v);
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < J; ++j) {
                double x = m(t, j);
                if (PanelDataset::is_missing(x) || x <= 0.0)
                    throw Error::input("NonPositiveSeries",
                                       "variable '" + v + "' must be strictly positive at " +
                                           ds.time_index()[static_cast<std::size_t>(t)].label() + "/" +
                                           ds.countries()[static_cast<std::size_t>(j)]);
            }
    }

    auto dlog = [&](const std::string& v) {
        const auto& m = ds.values(v);
        Eigen::MatrixXd out(T - 1, J);
        for (int t = 1; t < T; ++t)
            for (int j = 0; j < J; ++j) out(t - 1, j) = std::log(m(t, j)) - std::log(m(t - 1, j));
        return out;
    };

    std::vector<Period> idx(ds.time_index().begin() + 1, ds.time_index().end());
    PanelDataset diff(ds.countries(), idx);
    diff = diff.with_variable("dlog_" + dependent, "dlog", dlog(dependent));
    ModelSpec spec;
    spec.dependent = "dlog_" + dependent;
    spec.country_effects = true;
    for (const auto& rname : regressors) {
        diff = diff.with_variable("dlog_" + rname, "dlog", dlog(rname));
        spec.regressors.emplace_back("dlog_" + rname, SlopeScope::PerCountry);
    }
    // All coefficients are country-specific, so OLS coincides with the
    // SUR-weighted solution equation by equation; plain OLS keeps the
    // short yearly samples (T - 1 <= J) estimable.
    spec.weighting = Weighting::None;
    spec.covariance = CovarianceType::Classical;

    FitResult r = fit_panel(diff, spec, opts);
    int k_per_country = 1 + static_cast<int>(regressors.size());
    int t_used = static_cast<int>(r.residuals.rows());
    for (int j = 0; j < J; ++j) {
        double rss = r.residuals.col(j).squaredNorm();
        int dof = std::max(1, t_used - k_per_country);
        r.details["sigma[" + ds.countries()[static_cast<std::size_t>(j)] + "]"] =
            std::sqrt(rss / dof);
    }
    return r;
}

}  // namespace cepkit
