#include "lpball/sampling.hpp"

#include "lpball/specfun.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace lpball::sampling {

namespace {

// per-thread scratch; samplers are called in tight Monte Carlo loops
struct Scratch {
    std::vector<double> w, signs, full;
};
Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

void check_np(int n, double p) {
    if (n < 1) throw std::invalid_argument("BallMeasure: n must be >= 1");
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("BallMeasure: p must be finite and > 0");
}

} // namespace

BallMeasure BallMeasure::cone(int n, double p) {
    check_np(n, p);
    return {n, p, MeasureKind::cone, 0.0, 0};
}

BallMeasure BallMeasure::volume(int n, double p) {
    check_np(n, p);
    return {n, p, MeasureKind::volume, 1.0, 0};
}

BallMeasure BallMeasure::gamma_mixed(int n, double p, double alpha) {
    check_np(n, p);
    if (!(alpha > 0.0)) throw std::invalid_argument("BallMeasure: alpha must be > 0");
    return {n, p, MeasureKind::gamma_mixed, alpha, 0};
}

BallMeasure BallMeasure::projected_cone(int n, double p, int m) {
    check_np(n, p);
    if (m < 1) throw std::invalid_argument("BallMeasure: m must be >= 1");
    return {n, p, MeasureKind::projected_cone, 0.0, m};
}

double BallMeasure::mixing_shape() const {
    switch (kind) {
        case MeasureKind::volume: return 1.0;
        case MeasureKind::gamma_mixed: return alpha;
        case MeasureKind::projected_cone: return static_cast<double>(m) / p;
        case MeasureKind::cone: break;
    }
    throw std::domain_error("BallMeasure: cone measure has no mixing shape");
}

std::string BallMeasure::describe() const {
    std::string s;
    switch (kind) {
        case MeasureKind::cone: s = "cone"; break;
        case MeasureKind::volume: s = "volume"; break;
        case MeasureKind::gamma_mixed: s = "gamma-mixed(" + std::to_string(alpha) + ")"; break;
        case MeasureKind::projected_cone: s = "projected-cone(" + std::to_string(m) + ")"; break;
    }
    return s + " n=" + std::to_string(n) + " p=" + std::to_string(p);
}

double sample_generalized_gaussian(double p, Rng& rng) {
    // |g|^p is gamma(1/p, 1)
    return rng.sign() * std::pow(rng.gamma(1.0 / p), 1.0 / p);
}

namespace {

// Fills out with signed coordinates scaled by (W_i / denom)^{1/p} and keeps
// the p-th powers exact: sum_i W_i is the exact |G|_p^p of the draw.
double draw_gamma_coords(int n, double p, Rng& rng, std::span<double> w, std::span<double> signs) {
    double s = 0.0;
    do {
        s = 0.0;
        for (int i = 0; i < n; ++i) {
            w[static_cast<std::size_t>(i)] = rng.gamma(1.0 / p);
            signs[static_cast<std::size_t>(i)] = rng.sign();
            s += w[static_cast<std::size_t>(i)];
        }
    } while (s == 0.0);  // probability zero, but floating point can underflow
    return s;
}

void scale_coords(int n, double p, double denom, std::span<const double> w,
                  std::span<const double> signs, std::span<double> out) {
    for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        out[k] = signs[k] * std::pow(w[k] / denom, 1.0 / p);
    }
}

} // namespace

double sample_cone(int n, double p, Rng& rng, std::span<double> out) {
    check_np(n, p);
    if (out.size() < static_cast<std::size_t>(n)) throw std::invalid_argument("sample_cone: output too small");
    auto& sc = scratch();
    sc.w.resize(static_cast<std::size_t>(n));
    sc.signs.resize(static_cast<std::size_t>(n));
    const double s = draw_gamma_coords(n, p, rng, sc.w, sc.signs);
    scale_coords(n, p, s, sc.w, sc.signs, out);
    return std::pow(s, 1.0 / p);
}

void sample_volume(int n, double p, Rng& rng, std::span<double> out) {
    check_np(n, p);
    if (out.size() < static_cast<std::size_t>(n)) throw std::invalid_argument("sample_volume: output too small");
    auto& sc = scratch();
    sc.w.resize(static_cast<std::size_t>(n));
    sc.signs.resize(static_cast<std::size_t>(n));
    const double s = draw_gamma_coords(n, p, rng, sc.w, sc.signs);
    const double z = rng.exponential();
    scale_coords(n, p, s + z, sc.w, sc.signs, out);
}

void sample_gamma_mixed(int n, double p, double alpha, Rng& rng, std::span<double> out) {
    check_np(n, p);
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_gamma_mixed: alpha must be > 0");
    if (out.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("sample_gamma_mixed: output too small");
    auto& sc = scratch();
    sc.w.resize(static_cast<std::size_t>(n));
    sc.signs.resize(static_cast<std::size_t>(n));
    const double s = draw_gamma_coords(n, p, rng, sc.w, sc.signs);
    const double mix = rng.gamma(alpha);
    scale_coords(n, p, s + mix, sc.w, sc.signs, out);
}

void sample_projected_cone(int n, double p, int m, Rng& rng, std::span<double> out) {
    check_np(n, p);
    if (m < 1) throw std::invalid_argument("sample_projected_cone: m must be >= 1");
    if (out.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("sample_projected_cone: output too small");
    const int total = n + m;
    // separate buffer: sample_cone uses the w/signs scratch internally
    thread_local std::vector<double> full;
    full.resize(static_cast<std::size_t>(total));
    sample_cone(total, p, rng, full);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i)];
}

void sample(const BallMeasure& measure, Rng& rng, std::span<double> out) {
    switch (measure.kind) {
        case MeasureKind::cone: sample_cone(measure.n, measure.p, rng, out); return;
        case MeasureKind::volume: sample_volume(measure.n, measure.p, rng, out); return;
        case MeasureKind::gamma_mixed:
            sample_gamma_mixed(measure.n, measure.p, measure.alpha, rng, out);
            return;
        case MeasureKind::projected_cone:
            sample_projected_cone(measure.n, measure.p, measure.m, rng, out);
            return;
    }
    throw std::logic_error("sample: unknown measure kind");
}

std::vector<double> sample_matrix(const BallMeasure& measure, std::size_t count, Rng& rng) {
    std::vector<double> rows(count * static_cast<std::size_t>(measure.n));
    for (std::size_t i = 0; i < count; ++i)
        sample(measure, rng, std::span<double>(rows).subspan(i * measure.n, measure.n));
    return rows;
}

double radial_density(const BallMeasure& measure, double r) {
    if (measure.kind == MeasureKind::cone)
        throw std::invalid_argument("radial_density: cone measure has deterministic radius");
    if (r < 0.0 || r > 1.0) return 0.0;
    const double a = static_cast<double>(measure.n) / measure.p;  // gamma shape of |G|_p^p
    const double mix = measure.mixing_shape();
    if (r == 0.0) return measure.n == 1 ? radial_density(measure, 1e-300) : 0.0;
    const double rp = std::pow(r, measure.p);
    if (r == 1.0 && mix < 1.0) return std::numeric_limits<double>::infinity();
    const double log_d = std::log(static_cast<double>(measure.n)) + (measure.n - 1) * std::log(r) +
                         specfun::log_gamma(a + mix) - specfun::log_gamma(mix) -
                         specfun::log_gamma(a + 1.0) + (mix - 1.0) * std::log1p(-rp);
    return std::exp(log_d);
}

double radial_cdf(const BallMeasure& measure, double r) {
    if (measure.kind == MeasureKind::cone)
        throw std::invalid_argument("radial_cdf: cone measure has deterministic radius");
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    const double a = static_cast<double>(measure.n) / measure.p;
    // P(R <= r) = I_{r^p}(n/p, shape): substitute v = s^p in the radial density
    return specfun::reg_beta(a, measure.mixing_shape(), std::pow(r, measure.p));
}

namespace {
void append_double(std::string& line, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    line.append(buf, ptr);
}
} // namespace

void write_samples_csv(std::ostream& os, const BallMeasure& measure, std::size_t count,
                       RngState state) {
    Rng rng(state);
    std::vector<double> x(static_cast<std::size_t>(measure.n));
    std::string line;
    for (std::size_t i = 0; i < count; ++i) {
        sample(measure, rng, x);
        line.clear();
        for (int j = 0; j < measure.n; ++j) {
            if (j) line.push_back(',');
            append_double(line, x[static_cast<std::size_t>(j)]);
        }
        line.push_back('\n');
        os << line;
    }
}

} // namespace lpball::sampling
