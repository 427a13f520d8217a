#pragma once

#include <functional>

namespace olycost::mathfn {

// Standard normal density, CDF and survival function.
double norm_pdf(double x);
double norm_log_pdf(double x);
double norm_cdf(double x);
double norm_sf(double x);

// Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16),
// absolute error below 1e-15 over (0, 1).
double norm_quantile(double p);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Two-sided p-value for a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol);

} // namespace olycost::mathfn
