#include "lpball/rng.hpp"

#include <cmath>

namespace lpball {

namespace {
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace

Rng::Rng(RngState state) : state_(state) {
    std::uint64_t x = state.seed ^ (state.stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(splitmix64(x) >> 32),
                      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(splitmix64(x) >> 32),
                      static_cast<std::uint32_t>(splitmix64(x)), static_cast<std::uint32_t>(splitmix64(x) >> 32)};
    eng_.seed(seq);
}

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
    return 1.0 - uniform();
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Rng::exponential() {
    return -std::log(uniform_pos());
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_pos();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::sign() {
    return (eng_() & 1ULL) ? 1.0 : -1.0;
}

} // namespace lpball
