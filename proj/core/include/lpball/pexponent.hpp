#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace lpball {

/// Exponent p of an l_p (quasi-)norm, p in (0, inf].
///
/// For p >= 1 the dual exponent p' satisfies 1/p + 1/p' = 1 with the
/// conventions 1' = inf and inf' = 1.
class PExponent {
public:
    explicit PExponent(double p) : p_(p) {
        if (std::isnan(p) || p <= 0.0)
            throw std::invalid_argument("PExponent: p must be a positive real or infinity");
    }

    static PExponent infinity() {
        return PExponent(std::numeric_limits<double>::infinity());
    }

    double value() const { return p_; }
    bool is_finite() const { return std::isfinite(p_); }

    /// Dual exponent p' = p/(p-1). Defined for p >= 1 only.
    double dual() const {
        if (p_ < 1.0)
            throw std::domain_error("PExponent::dual: dual exponent requires p >= 1");
        if (!is_finite()) return 1.0;
        if (p_ == 1.0) return std::numeric_limits<double>::infinity();
        return p_ / (p_ - 1.0);
    }

    /// l_p norm of x (max norm when p = inf).
    double norm(std::span<const double> x) const { return lp_norm(x, p_); }

    static double lp_norm(std::span<const double> x, double p) {
        if (!std::isfinite(p)) {
            double m = 0.0;
            for (double v : x) m = std::max(m, std::abs(v));
            return m;
        }
        double s = 0.0;
        for (double v : x) s += std::pow(std::abs(v), p);
        return std::pow(s, 1.0 / p);
    }

    /// sum |x_i|^p (finite p only).
    static double norm_pow(std::span<const double> x, double p) {
        double s = 0.0;
        for (double v : x) s += std::pow(std::abs(v), p);
        return s;
    }

private:
    double p_;
};

} // namespace lpball
