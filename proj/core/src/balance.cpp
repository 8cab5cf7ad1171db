#include "lpball/balance.hpp"

#include <cmath>
#include <stdexcept>

namespace lpball::apps {

namespace {
double floored_log(double x) { return std::log(std::max(x, 2.0)); }
} // namespace

BalanceResult balance_exhaustive(const PointSet& points, const PExponent& p) {
    const int m = points.count();
    const int d = points.ambient_dim();
    if (m > 24) throw std::invalid_argument("balance_exhaustive: m must be <= 24 (use the greedy)");

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < m; ++i) sum += points.matrix().row(i).transpose();
    std::vector<int> signs(static_cast<std::size_t>(m), +1);

    auto norm_of = [&](const Eigen::VectorXd& v) {
        return PExponent::lp_norm({v.data(), static_cast<std::size_t>(v.size())}, p.value());
    };

    double best = norm_of(sum);
    std::vector<int> best_signs = signs;

    // Gray-code walk over the signs of x_2..x_m (x_1 pinned to +1): exactly
    // one sign flips between consecutive patterns.
    const std::uint64_t total = m > 1 ? (1ULL << (m - 1)) : 1;
    std::uint64_t gray = 0;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        const std::uint64_t next_gray = idx ^ (idx >> 1);
        const std::uint64_t changed = gray ^ next_gray;
        gray = next_gray;
        int bit = 0;
        while (!((changed >> bit) & 1ULL)) ++bit;
        const int i = bit + 1;  // sign of x_{i} flips
        signs[static_cast<std::size_t>(i)] = -signs[static_cast<std::size_t>(i)];
        sum += 2.0 * signs[static_cast<std::size_t>(i)] * points.matrix().row(i).transpose();
        const double v = norm_of(sum);
        if (v < best) {
            best = v;
            best_signs = signs;
        }
    }
    return {SignPattern{std::move(best_signs)}, best};
}

BalanceResult balance_greedy(const PointSet& points, const PExponent& p) {
    const int m = points.count();
    const int d = points.ambient_dim();
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    std::vector<int> signs;
    signs.reserve(static_cast<std::size_t>(m));
    auto norm_of = [&](const Eigen::VectorXd& v) {
        return PExponent::lp_norm({v.data(), static_cast<std::size_t>(v.size())}, p.value());
    };
    for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd plus = sum + points.matrix().row(i).transpose();
        const Eigen::VectorXd minus = sum - points.matrix().row(i).transpose();
        if (norm_of(plus) <= norm_of(minus)) {  // ties toward +1
            sum = plus;
            signs.push_back(+1);
        } else {
            sum = minus;
            signs.push_back(-1);
        }
    }
    // canonicalize: global flip so the first sign is +1 (norm unchanged)
    if (!signs.empty() && signs.front() < 0)
        for (int& s : signs) s = -s;
    return {SignPattern{std::move(signs)}, norm_of(sum)};
}

BalanceBoundReport komlos_bound_check(const PointSet& points, const BalanceResult& result) {
    BalanceBoundReport rep;
    rep.value = result.value;
    const double d = static_cast<double>(points.span_rank());
    rep.normalizer = std::sqrt(floored_log(d)) * points.max_l2_norm();
    rep.constant = rep.value / rep.normalizer;
    rep.note = "normalizer sqrt(log max(d,2)) * max |x|_2 with d = span rank; log floored at log 2";
    return rep;
}

BalanceBoundReport lp_balance_bound_check(const PointSet& points, const PExponent& p,
                                          const BalanceResult& result) {
    if (!p.is_finite()) {
        BalanceBoundReport rep = komlos_bound_check(points, result);
        rep.note = "p = inf: deferred to the sup-norm bound; " + rep.note;
        return rep;
    }
    if (p.value() < 2.0) throw std::invalid_argument("lp_balance_bound_check: p >= 2 required");
    BalanceBoundReport rep;
    rep.value = result.value;
    const double d = static_cast<double>(points.span_rank());
    rep.normalizer = std::sqrt(p.value()) * std::pow(d, 1.0 / p.value()) * points.max_l2_norm();
    rep.constant = rep.value / rep.normalizer;
    rep.note = "normalizer sqrt(p) d^{1/p} max |x|_2 with d = span rank";
    return rep;
}

double entropy_interpolate(double e_k_2, double e_k_inf, const PExponent& p) {
    if (!(e_k_2 > 0.0) || !(e_k_inf > 0.0))
        throw std::invalid_argument("entropy_interpolate: entropy numbers must be positive");
    if (p.is_finite() && p.value() < 2.0)
        throw std::invalid_argument("entropy_interpolate: p >= 2 required");
    const double w = p.is_finite() ? 2.0 / p.value() : 0.0;
    return std::pow(e_k_2, w) * std::pow(e_k_inf, 1.0 - w);
}

namespace {
Estimate gaussian_span_functional(const PointSet& points, std::size_t samples, RngState state,
                                  bool sup_dot) {
    if (samples < 1000) throw std::invalid_argument("sup_dot_gaussian: need at least 10^3 samples");
    const Eigen::MatrixXd basis = points.span_basis();  // r x d
    const int r = static_cast<int>(basis.rows());
    Rng rng(state);
    Eigen::VectorXd g(r), x(points.ambient_dim());
    MeanAccumulator acc;
    for (std::size_t i = 0; i < samples; ++i) {
        for (int j = 0; j < r; ++j) g(j) = rng.normal();
        x.noalias() = basis.transpose() * g;
        if (sup_dot) {
            double sup = 0.0;
            for (int q = 0; q < points.count(); ++q)
                sup = std::max(sup, std::abs(points.matrix().row(q).dot(x)));
            acc.add(sup);
        } else {
            acc.add(x.cwiseAbs().maxCoeff());
        }
    }
    return acc.estimate(state);
}
} // namespace

Estimate sup_dot_gaussian(const PointSet& points, std::size_t samples, RngState state) {
    return gaussian_span_functional(points, samples, state, true);
}

Estimate linf_gaussian_on_span(const PointSet& points, std::size_t samples, RngState state) {
    return gaussian_span_functional(points, samples, state, false);
}

} // namespace lpball::apps
