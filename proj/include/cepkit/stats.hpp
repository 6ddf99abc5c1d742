#pragma once

namespace cepkit {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
/// Relative accuracy better than 1e-10 for x/2 <= 250 at the dof used here.
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of a chi-squared variate with `dof` degrees of freedom.
double chi2_sf(double statistic, int dof);

double norm_pdf(double x);
double norm_cdf(double x);
double log_norm_pdf(double x);

/// log Phi(x), stable far into the left tail.
double log_norm_cdf(double x);

}  // namespace cepkit
