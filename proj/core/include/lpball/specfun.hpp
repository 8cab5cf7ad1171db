#pragma once

#include "lpball/pexponent.hpp"
#include "lpball/quadrature.hpp"

namespace lpball::specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Volume of the unit l_p ball in R^n: [2 Gamma(1/p+1)]^n / Gamma(n/p+1),
/// 2^n for p = inf. Throws std::overflow_error / std::underflow_error when
/// the value leaves the double range (never silently saturates).
double ball_volume(int n, const PExponent& p);
double log_ball_volume(int n, const PExponent& p);

/// alpha(p, lambda) = 2 int_0^inf exp(-lambda t^p - t^2) dt, for finite p > 0
/// and lambda >= 0. Strictly decreasing in lambda; lambda^{1/p} alpha(p, lambda)
/// is strictly increasing in lambda.
double alpha(double p, double lambda, const QuadratureSpec& spec = {});

/// E|g|^p for a standard Gaussian g: 2^{p/2} Gamma((p+1)/2) / sqrt(pi), p >= 0.
double gauss_abs_moment(double p);

/// q-th absolute moment of the density exp(-|t|^p) / (2 Gamma(1+1/p)):
/// Gamma((q+1)/p + 1) / [(q+1) Gamma(1/p + 1)], for finite p > 0 and q >= 0.
double gg_abs_moment(double p, double q);

/// theta(r) = int_{-r}^{r} exp(-t^2/2) dt, r > 0.
double theta(double r);

/// int_t^inf exp(-u^p) du for t > 0, p >= 1.
double tail_integral(double t, double p, const QuadratureSpec& spec = {});

/// Regularized lower/upper incomplete gamma functions P(a, x), Q(a, x).
double reg_gamma_p(double a, double x);
double reg_gamma_q(double a, double x);

/// Regularized incomplete beta function I_x(a, b).
double reg_beta(double a, double b, double x);

/// Quantile of the gamma(a, 1) distribution: x with P(a, x) = u.
double gamma_quantile(double a, double u);

} // namespace lpball::specfun
