#pragma once

#include "lpball/estimate.hpp"
#include "lpball/sampling.hpp"

#include <span>
#include <string>
#include <vector>

namespace lpball::slabs {

enum class Orientation { outer /* |x_i| >= s_i */, inner /* |x_i| <= s_i */ };

/// Per-coordinate thresholds in [0, 1]^n plus the slab orientation.
struct SlabSpec {
    std::vector<double> thresholds;
    Orientation orientation = Orientation::outer;

    SlabSpec() = default;
    SlabSpec(std::vector<double> s, Orientation o);
};

/// Joint and product-of-marginals probabilities estimated from one shared
/// sample pool; the difference joint - product carries a delta-method
/// standard error that accounts for the pool-induced correlation.
struct SlabEstimates {
    Estimate joint;
    Estimate product;
    double margin = 0.0;      // joint - product
    double margin_se = 0.0;
    bool below_resolution = false;  // no joint hits in the pool
};

SlabEstimates slab_probabilities(const sampling::BallMeasure& measure, const SlabSpec& slab,
                                 std::size_t samples, RngState state);

Estimate joint_slab_prob(const sampling::BallMeasure& measure, const SlabSpec& slab,
                         std::size_t samples, RngState state);
Estimate product_slab_prob(const sampling::BallMeasure& measure, const SlabSpec& slab,
                           std::size_t samples, RngState state);

struct SlabGridPoint {
    SlabSpec slab;
    SlabEstimates est;
    bool pass = false;  // margin <= z * margin_se
};

struct SubindependenceReport {
    sampling::BallMeasure measure;
    double z = 3.0;
    std::vector<SlabGridPoint> points;
    double min_margin_sigma = 0.0;  // most violating point, in units of se
    bool pass = false;
};

/// One-sided verification that joint <= product at every grid point, at
/// confidence z (in standard errors of the margin).
SubindependenceReport subindependence_verdict(const sampling::BallMeasure& measure,
                                              std::span<const SlabSpec> grid, double z,
                                              std::size_t samples, RngState state);

/// z for a Bonferroni-corrected family of one-sided tests at family level.
double bonferroni_z(std::size_t family_size, double family_level = 1e-3);

/// Slab grids with thresholds placed at marginal quantiles (so joint hit
/// counts stay meaningful across n and p).
std::vector<SlabSpec> quantile_slab_grid(const sampling::BallMeasure& measure,
                                         std::span<const double> quantiles, Orientation orientation,
                                         std::size_t pilot_samples, RngState state);

/// Nonnegative step function on [0, 1]: value values[i] on [knots[i-1], knots[i]).
struct StepFunction {
    std::vector<double> knots;   // strictly increasing, in (0, 1)
    std::vector<double> values;  // size knots.size() + 1, nonnegative

    StepFunction(std::vector<double> k, std::vector<double> v);
    static StepFunction indicator_above(double s);  // 1[x >= s]
    static StepFunction indicator_below(double s);  // 1[x <= s]
    double operator()(double x) const;
    bool nondecreasing() const;
    bool nonincreasing() const;
};

struct FkgReport {
    double joint = 0.0;
    double product = 0.0;
    double margin_se = 0.0;
    /// +1: joint <= product expected; -1: joint >= product expected;
    /// 0: no direction asserted (mixed monotonicity beyond the covered cases).
    int expected_direction = 0;
    bool pass = false;
};

/// Monte Carlo check of E prod f_i(|X_i| / |X|_p) vs prod E f_i(...) for
/// i.i.d. generalized Gaussian X. Monotone-aligned families give <=, an
/// opposed pair on n = 2 gives >=.
FkgReport fkg_monotone_check(double p, int n, std::span<const StepFunction> fs, double z,
                             std::size_t samples, RngState state);

/// JSON rendering of the verdict report (external interface).
std::string subindependence_report_json(const SubindependenceReport& report);

} // namespace lpball::slabs
