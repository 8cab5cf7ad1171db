#pragma once

#include "lpball/estimate.hpp"
#include "lpball/pexponent.hpp"
#include "lpball/pointset.hpp"

#include <string>
#include <vector>

namespace lpball::apps {

/// Signs in {-1, +1}^m; the first sign is pinned to +1 (the minimized norm
/// is invariant under a global flip, so this makes the enumeration canonical).
struct SignPattern {
    std::vector<int> signs;
};

struct BalanceResult {
    SignPattern signs;
    double value = 0.0;  // |sum_i eps_i x_i|_p at the returned signs
};

/// Exact minimizer of |sum eps_i x_i|_p over all sign patterns, by Gray-code
/// enumeration of 2^{m-1} patterns. Deterministic and sign-canonical;
/// requires m <= 24.
BalanceResult balance_exhaustive(const PointSet& points, const PExponent& p);

/// Sequential heuristic: pick each eps_i to minimize the running partial-sum
/// norm, ties resolved toward +1.
BalanceResult balance_greedy(const PointSet& points, const PExponent& p);

struct BalanceBoundReport {
    double value = 0.0;
    double normalizer = 0.0;
    double constant = 0.0;  // value / normalizer; the implied constant
    std::string note;
};

/// Implied constant against the sup-norm balancing bound
/// sqrt(log max(d, 2)) * max_i |x_i|_2, with d the span rank.
BalanceBoundReport komlos_bound_check(const PointSet& points, const BalanceResult& result);

/// Implied constant against the l_p bound sqrt(p) d^{1/p} max_i |x_i|_2 for
/// p >= 2; p = inf defers to komlos_bound_check.
BalanceBoundReport lp_balance_bound_check(const PointSet& points, const PExponent& p,
                                          const BalanceResult& result);

/// e_2^{2/p} * e_inf^{1 - 2/p}: interpolation of entropy numbers between the
/// l_2 and l_inf endpoints.
double entropy_interpolate(double e_k_2, double e_k_inf, const PExponent& p);

/// E sup_i |<G, x_i>| for a standard Gaussian on the span of the points.
Estimate sup_dot_gaussian(const PointSet& points, std::size_t samples, RngState state);

/// E |G|_inf (ambient sup norm) for a standard Gaussian on the span.
Estimate linf_gaussian_on_span(const PointSet& points, std::size_t samples, RngState state);

} // namespace lpball::apps
