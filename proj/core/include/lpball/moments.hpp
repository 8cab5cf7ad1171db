#pragma once

#include "lpball/estimate.hpp"
#include "lpball/sampling.hpp"

#include <span>
#include <utility>
#include <vector>

namespace lpball::moments {

/// A direction vector a in R^n (not all zero) together with the permutation
/// that puts |a_i| into nonincreasing order.
class Direction {
public:
    explicit Direction(std::vector<double> a);

    const std::vector<double>& coeffs() const { return a_; }
    int dim() const { return static_cast<int>(a_.size()); }
    /// |a_{sigma(0)}| >= |a_{sigma(1)}| >= ...
    const std::vector<double>& sorted_abs() const { return sorted_abs_; }
    double l2_norm() const;

    static Direction axis(int n, int i = 0);
    static Direction diagonal(int n);  // (1,...,1)/sqrt(n)
    static Direction random_unit(int n, Rng& rng);

private:
    std::vector<double> a_;
    std::vector<double> sorted_abs_;
};

/// (1/vol) int_{B_p^n} |x_1|^q dx =
/// Gamma(n/p+1) Gamma((q+1)/p+1) / [(q+1) Gamma(1/p+1) Gamma((n+q)/p+1)].
double marginal_abs_moment_exact(int n, double p, double q);

/// Gamma(n/p+1) / Gamma((n+q)/p+1).
double gamma_ratio_moment(int n, double p, double q);

/// Gluskin-Kwapien style two-sided moment expression for sums of independent
/// generalized Gaussians: q^{1/p} |(head)|_{p'} + sqrt(q) |(tail)|_2 on the
/// nonincreasing rearrangement, split at floor(q).
double gk_estimate(const Direction& a, double p, double q);

/// Right-hand side of the closed moment formula on the ball:
/// gk_estimate(a, p, q) / max(n, q)^{1/p}.
double full_moment_formula(const Direction& a, int n, double p, double q);

/// Monte Carlo estimate of (E_nu |<a, X>|^q)^{1/q}; the standard error is
/// propagated through the q-th root by the delta method. Flagged when the
/// relative standard error exceeds 5%.
Estimate functional_moment_mc(const Direction& a, const sampling::BallMeasure& measure, double q,
                              std::size_t samples, RngState state);

/// Same, evaluated for several q on one shared sample pool.
std::vector<Estimate> functional_moment_mc_multi(const Direction& a,
                                                 const sampling::BallMeasure& measure,
                                                 std::span<const double> qs, std::size_t samples,
                                                 RngState state);

struct KhinchinePair {
    double A = 0.0;
    double B = 0.0;
};

/// Order-of-magnitude optimal Khinchine constants on the ball (four-case
/// formula; the two expressions swap roles at p = 2).
KhinchinePair khinchine_constants(double p, double q, int n);

/// sup over the grid of q^{-1/alpha} m_q, for alpha in [1, 2].
double psi_alpha_norm(std::span<const std::pair<double, double>> moments, double alpha);

/// Predicted psi_2 constant of direction theta (unit l_2) on the ball for
/// p in [1, 2]: n^{1/p-1/2} |theta|_{p'}.
double psi2_direction_constant(const Direction& theta, int n, double p);

/// Default moment grid used by the psi_alpha estimators.
std::vector<double> psi_moment_grid();

/// MC psi_alpha constant of <., theta> under the measure: the sup over the
/// moment grid of q^{-1/alpha} m_q / m_2.
Estimate psi_constant_mc(const Direction& theta, const sampling::BallMeasure& measure,
                         double alpha, std::size_t samples, RngState state);

} // namespace lpball::moments
