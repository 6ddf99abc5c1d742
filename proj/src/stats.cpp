#include "cepkit/stats.hpp"

#include <cmath>
#include <limits>

#include "cepkit/errors.hpp"

namespace cepkit {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw Error::numerical("NoConvergence", "incomplete gamma series did not converge");
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw Error::numerical("NoConvergence", "incomplete gamma continued fraction did not converge");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw Error::input("InvalidArgument", "regularized_gamma_p requires a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw Error::input("InvalidArgument", "regularized_gamma_q requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double statistic, int dof) {
    if (dof < 1)
        throw Error::input("InvalidArgument", "chi2_sf requires dof >= 1");
    if (std::isnan(statistic)) return std::numeric_limits<double>::quiet_NaN();
    if (statistic <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double log_norm_pdf(double x) { return -0.5 * x * x - std::log(kSqrt2Pi); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double log_norm_cdf(double x) {
    if (x > -1.0) return std::log1p(-0.5 * std::erfc(x * M_SQRT1_2));
    double tail = 0.5 * std::erfc(-x * M_SQRT1_2);
    if (tail > 1e-290) return std::log(tail);
    // Deep tail: asymptotic expansion of Mills' ratio.
    double x2 = x * x;
    double corr = -1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return log_norm_pdf(x) - std::log(-x) + std::log1p(corr);
}

}  // namespace cepkit
