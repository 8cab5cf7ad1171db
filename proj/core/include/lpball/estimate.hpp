#pragma once

#include "lpball/rng.hpp"

#include <cmath>
#include <cstdint>
#include <span>

namespace lpball {

/// A Monte Carlo estimate: point value, standard error, provenance.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    RngState seed{};
    /// Set when the estimator could not reach its precision target
    /// (e.g. relative standard error above threshold, or zero hits).
    bool flagged = false;

    double lo(double z = 3.0) const { return value - z * std_error; }
    double hi(double z = 3.0) const { return value + z * std_error; }
};

/// Mean and standard error of a sample.
inline Estimate mean_estimate(std::span<const double> xs, RngState seed = {}) {
    const std::uint64_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        ss += d * d;
    }
    const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    Estimate e;
    e.value = mean;
    e.std_error = std::sqrt(var / static_cast<double>(n));
    e.samples = n;
    e.seed = seed;
    return e;
}

/// Streaming accumulator (Welford) for mean / standard error.
class MeanAccumulator {
public:
    void add(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const { return std::sqrt(variance() / static_cast<double>(n_)); }
    Estimate estimate(RngState seed = {}) const {
        Estimate e;
        e.value = mean_;
        e.std_error = std_error();
        e.samples = n_;
        e.seed = seed;
        return e;
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Delta-method transform of an estimate through x -> x^{1/q}.
inline Estimate root_transform(const Estimate& e, double q) {
    Estimate r = e;
    r.value = std::pow(e.value, 1.0 / q);
    r.std_error = e.value > 0.0 ? r.value / (q * e.value) * e.std_error : 0.0;
    return r;
}

} // namespace lpball
