#pragma once

#include "lpball/pexponent.hpp"
#include "lpball/rng.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lpball::sampling {

enum class MeasureKind { cone, volume, gamma_mixed, projected_cone };

/// A radial measure on the l_p ball in R^n: cone measure on the boundary,
/// normalized volume, the gamma(alpha)-mixed family with density proportional
/// to (1 - |x|_p^p)^{alpha-1}, or the projection of the cone measure on the
/// boundary of the (n+m)-dimensional ball onto the first n coordinates.
/// projected_cone(m) coincides in distribution with gamma_mixed(m/p).
struct BallMeasure {
    int n = 1;
    double p = 2.0;  // finite
    MeasureKind kind = MeasureKind::volume;
    double alpha = 1.0;  // gamma_mixed only
    int m = 1;           // projected_cone only

    static BallMeasure cone(int n, double p);
    static BallMeasure volume(int n, double p);
    static BallMeasure gamma_mixed(int n, double p, double alpha);
    static BallMeasure projected_cone(int n, double p, int m);

    /// Shape of the gamma mixing variable (alpha, m/p, or 1 for volume).
    /// The cone measure has no absolutely continuous part.
    double mixing_shape() const;
    std::string describe() const;
};

/// One variate with density exp(-|t|^p) / (2 Gamma(1+1/p)), generated as
/// (random sign) * W^{1/p} with W ~ gamma(1/p, 1).
double sample_generalized_gaussian(double p, Rng& rng);

/// Cone-measure sample on the boundary of the l_p ball, Y = G/|G|_p.
/// Returns |G|_p (which is independent of Y).
double sample_cone(int n, double p, Rng& rng, std::span<double> out);

/// Normalized-volume sample V = G / (|G|_p^p + Z)^{1/p}, Z exponential.
void sample_volume(int n, double p, Rng& rng, std::span<double> out);

/// V = G / (|G|_p^p + W)^{1/p}, W ~ gamma(alpha, 1).
void sample_gamma_mixed(int n, double p, double alpha, Rng& rng, std::span<double> out);

/// Cone sample on the boundary of the (n+m)-dimensional ball, truncated to
/// the first n coordinates. Sampled literally (not via the gamma shortcut)
/// so it can serve as an independent route in distribution tests.
void sample_projected_cone(int n, double p, int m, Rng& rng, std::span<double> out);

/// Dispatch on measure kind.
void sample(const BallMeasure& measure, Rng& rng, std::span<double> out);

/// count samples, row-major (count x n).
std::vector<double> sample_matrix(const BallMeasure& measure, std::size_t count, Rng& rng);

/// Density of the radius |X|_p on [0, 1] for the absolutely continuous kinds;
/// rejects kind == cone (the radius is deterministically 1).
double radial_density(const BallMeasure& measure, double r);

/// CDF of the radius on [0, 1].
double radial_cdf(const BallMeasure& measure, double r);

/// Locale-independent CSV export, one row per vector.
void write_samples_csv(std::ostream& os, const BallMeasure& measure, std::size_t count,
                       RngState state);

} // namespace lpball::sampling
