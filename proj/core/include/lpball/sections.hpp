#pragma once

#include "lpball/estimate.hpp"
#include "lpball/quadrature.hpp"
#include "lpball/subspace.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lpball::sections {

// ---------------------------------------------------------------------------
// Exact quantities on R^k
// ---------------------------------------------------------------------------

/// E |G|_p^p for a standard Gaussian on R^k: k 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
double section_pmoment_exact(int k, double p);

/// E |G|_2^beta = 2^{beta/2} Gamma((k+beta)/2) / Gamma(k/2), beta > -k.
/// This is also the factor converting spherical averages of degree-beta
/// homogeneous functions into Gaussian moments.
double gauss_norm_moment(int k, double beta);

/// E exp(-coef |G|_p^p) over R^k = [alpha(p, coef 2^{p/2}) / sqrt(pi)]^k.
double laplace_pnorm_exact(int k, double p, double coef);

/// gamma_k(r B_inf^k) = (theta(r) / sqrt(2 pi))^k.
double cube_gaussian_exact(int k, double r);

// ---------------------------------------------------------------------------
// Monte Carlo estimators on a subspace
// ---------------------------------------------------------------------------

/// E |G|_p^beta on the subspace, beta > -k. The radial factor E R^beta is
/// exact (R independent of the direction), so only the bounded directional
/// part is sampled; this keeps negative moments finite-variance all the way
/// to the integrability boundary.
Estimate section_moment(const Subspace& E, double p, double beta, std::size_t samples,
                        RngState state);

/// E |G|^p_{section} / E |G|^p_{R^k} (denominator exact).
Estimate section_pmoment_ratio(const Subspace& E, double p, std::size_t samples, RngState state);

/// Shared-pool version across a p grid (one directional pool per subspace).
std::vector<Estimate> section_pmoment_ratio_scan(const Subspace& E, std::span<const double> ps,
                                                 std::size_t samples, RngState state);

/// E exp(-lambda |G|_p^{theta_exp * p}) on the subspace, lambda >= 0,
/// theta_exp in (0, 1].
Estimate laplace_functional(const Subspace& E, double p, double lambda, double theta_exp,
                            std::size_t samples, RngState state);

/// Gamma((p+1)/2)-normalized Laplace ratio F(p): nondecreasing on (0, 2],
/// >= 1 for p >= 2, and exactly 1 at p = 2.
Estimate normalized_laplace_ratio(const Subspace& E, double p, double lambda, std::size_t samples,
                                  RngState state);

struct ScanPoint {
    double x = 0.0;
    Estimate est;
};

/// r_p(lambda) = E e^{-lambda |G|_p^p} on E / same on R^k, on a lambda grid
/// with a shared sample pool; r_p(0) = 1 exactly.
std::vector<ScanPoint> laplace_ratio_scan(const Subspace& E, double p,
                                          std::span<const double> lambdas, std::size_t samples,
                                          RngState state);

/// gamma_E(E intersect r B_inf^n) = P(max_i |(basis^T g)_i| <= r).
Estimate cube_section_gaussian(const Subspace& E, double r, std::size_t samples, RngState state);

/// Shared-pool cube-measure ratio scan over an increasing r grid.
std::vector<ScanPoint> cube_ratio_scan(const Subspace& E, std::span<const double> rs,
                                       std::size_t samples, RngState state);

/// One-sided CI-overlap monotonicity verdict for a scan: with direction = -1
/// (nonincreasing) the scan fails only when a later point exceeds an earlier
/// one by more than z combined standard errors; direction = +1 is symmetric.
bool scan_monotone_within_ci(std::span<const ScanPoint> points, int direction, double z);

struct BoundCheck {
    double estimate = 0.0;
    double estimate_se = 0.0;
    double bound = 0.0;
    double bound_se = 0.0;
    double slack_sigma = 0.0;  // signed distance to the bound in combined se
    bool pass = false;
};

/// gamma_E(E intersect r B_inf^n) <= gamma_k(r sqrt(n/k) B_inf^k).
BoundCheck cube_upper_bound_check(const Subspace& E, double r, double z, std::size_t samples,
                                  RngState state);

/// gamma_E(E intersect r B_inf^n) >= gamma_k(r B_inf^k).
BoundCheck cube_lower_bound_check(const Subspace& E, double r, double z, std::size_t samples,
                                  RngState state);

/// Brascamp-Lieb consequence, p >= 2:
/// E e^{-lambda |G|^p_section} <= E e^{-lambda (k/n)^{(p-2)/2} |G|^p_{R^k}}
/// (right side exact).
BoundCheck laplace_upper_bound_check(const Subspace& E, double p, double lambda, double z,
                                     std::size_t samples, RngState state);

struct MomentBoundReport {
    BoundCheck positive;  // E|G|^beta_section >= (k/n)^{beta(1/2-1/p)} E|G|^beta_{R^k}
    BoundCheck negative;  // E|G|^{-alpha}_section <= (n/k)^{alpha(1/2-1/p)} E|G|^{-alpha}_{R^k}
    bool pass = false;
};

/// Moment consequences of the Brascamp-Lieb Laplace bound (p >= 2,
/// 0 <= beta <= p, 0 <= alpha_neg < k).
MomentBoundReport bl_moment_bounds_check(const Subspace& E, double p, double beta,
                                         double alpha_neg, double z, std::size_t samples,
                                         RngState state);

struct MomentOrderReport {
    BoundCheck negative;  // comparison of E|G|^{-alpha} between section and R^k
    BoundCheck positive;  // comparison of E|G|^{beta}
    /// +1 when the section side dominates the positive moments (p < 2),
    /// -1 when it is dominated (p > 2), 0 at p = 2 (equalities).
    int expected_direction = 0;
    bool pass = false;
};

/// Stochastic-order comparison of section vs full-space moments: for p < 2
/// the section has smaller negative moments and larger positive ones; the
/// directions flip at p = 2. 0 < alpha_neg < k, 0 < beta <= p.
MomentOrderReport section_moment_order_check(const Subspace& E, double p, double alpha_neg,
                                             double beta, double z, std::size_t samples,
                                             RngState state);

struct VolumeRatioEstimate {
    Estimate est;
    double extrapolation_residual = 0.0;  // last Neville correction
    std::vector<ScanPoint> scan;          // the lambda scan that was extrapolated
};

/// vol_k(E intersect B_p^n) / vol_k(B_p^k), computed as the large-lambda
/// limit of the Laplace ratio with Richardson (Neville) extrapolation in
/// lambda^{-2/p}. The radial integral per direction is exact quadrature, so
/// only direction noise enters; k = n returns exactly 1.
VolumeRatioEstimate volume_ratio(const Subspace& E, double p, std::size_t samples, RngState state);

// ---------------------------------------------------------------------------
// One-dimensional tilted densities and the peaked ordering
// ---------------------------------------------------------------------------

/// Probability density exp(-lambda a^p |t|^p - a^2 t^2) with a = alpha(p, lambda);
/// the normalizer makes it integrate to 1 exactly.
struct TiltedDensity {
    double p = 2.0;
    double lambda = 1.0;
    double alpha = 0.0;  // computed on construction

    TiltedDensity(double p, double lambda, const QuadratureSpec& spec = {});
    double density(double t) const;
    /// mass of [-a, a]
    double interval_mass(double a, const QuadratureSpec& spec = {}) const;
    double total_mass(const QuadratureSpec& spec = {}) const;
};

/// Truncated Gaussian density exp(-theta(r)^2 t^2 / 2) on [-r/theta, r/theta].
struct CubeDensity {
    double r = 1.0;
    double theta_r = 0.0;  // computed

    explicit CubeDensity(double r);
    double density(double t) const;
    double interval_mass(double a) const;
};

enum class PeakedOrder {
    first_below,   // d1 is less peaked: mass_1([-a,a]) <= mass_2([-a,a]) for all a
    second_below,  // d2 is less peaked
    equal,
    none,          // no covered case applies
};

/// Predicted peaked-ordering between two tilted densities, by case analysis
/// on (p, q, lambda, alpha values). Returns none when no case applies.
PeakedOrder predict_peaked_order(const TiltedDensity& d1, const TiltedDensity& d2);

struct PeakedCompareRow {
    double a = 0.0;
    double mass1 = 0.0;
    double mass2 = 0.0;
};

struct PeakedCompareReport {
    PeakedOrder predicted = PeakedOrder::none;
    bool asserted = false;  // false when predicted == none (values still reported)
    bool pass = false;
    std::vector<PeakedCompareRow> rows;
};

/// Quadrature comparison of interval masses over the a grid; asserts the
/// predicted ordering up to tol wherever a case applies.
PeakedCompareReport peaked_compare(const TiltedDensity& d1, const TiltedDensity& d2,
                                   std::span<const double> a_grid, double tol = 1e-8);

/// For 0 < p < q: alpha(p, lambda/Gamma((p+1)/2)) < alpha(q, lambda/Gamma((q+1)/2)).
struct AlphaComparison {
    double lhs = 0.0;
    double rhs = 0.0;
    bool strict = false;
};
AlphaComparison normalized_alpha_comparison(double p, double q, double lambda,
                                            const QuadratureSpec& spec = {});

/// Named convex test function on [0, inf).
struct ConvexFn {
    std::string name;
    std::function<double(double)> f;
};
std::vector<ConvexFn> default_convex_family();

struct ConvexOrderRow {
    std::string name;
    double lhs = 0.0;   // E f(X^p / E X^p)
    double rhs = 0.0;   // E f(X^q / E X^q)
    double margin_se = 0.0;
    bool pass = false;
};

struct ConvexOrderReport {
    std::vector<ConvexOrderRow> rows;
    bool pass = false;
};

/// MC check that E f(X^p / EX^p) <= E f(X^q / EX^q) for 0 < p < q and convex f.
ConvexOrderReport power_convex_order_check(const std::function<double(Rng&)>& sampler, double p,
                                           double q, std::span<const ConvexFn> fs, double z,
                                           std::size_t samples, RngState state);

/// Integrand profile behind the Brascamp-Lieb section bound:
/// psi(s) = 2 int_0^inf exp(-lambda s^{2-p} t^p - t^2/2) dt.
double bl_profile(double s, double p, double lambda, const QuadratureSpec& spec = {});

} // namespace lpball::sections
