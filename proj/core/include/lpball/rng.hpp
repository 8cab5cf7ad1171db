#pragma once

#include <cstdint>
#include <random>

namespace lpball {

/// Identifies one reproducible random stream. The same (seed, stream) pair
/// always produces the same variate sequence bit-for-bit; disjoint stream ids
/// give independent streams for parallel workers.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngState with_stream(std::uint64_t s) const { return {seed, s}; }
};

/// mt19937_64 plus hand-rolled variate transforms. The transforms are written
/// out (rather than taken from <random> distributions) so that the produced
/// sequence depends only on the engine, not on the standard library build.
class Rng {
public:
    explicit Rng(RngState state);

    RngState state() const { return state_; }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_pos();
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Standard exponential.
    double exponential();
    /// gamma(shape, 1). Marsaglia-Tsang for shape >= 1; for shape < 1 the
    /// boost identity gamma(a) = gamma(a+1) * U^{1/a} (the density is
    /// unbounded at 0, so plain rejection is not usable there).
    double gamma(double shape);
    /// Random sign, +1 or -1 with probability 1/2 each.
    double sign();

private:
    RngState state_;
    std::mt19937_64 eng_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace lpball
