#include "lpball/sections.hpp"

#include "lpball/pexponent.hpp"
#include "lpball/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpball::sections {

namespace {
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

void check_p(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("sections: p must be finite and > 0");
}

// Uniform direction on S^{k-1} into u; returns |B^T u|_p given the basis.
double direction_pnorm(const Eigen::MatrixXd& basis, double p, Rng& rng, Eigen::VectorXd& g,
                       Eigen::VectorXd& x) {
    const int k = static_cast<int>(basis.rows());
    double s = 0.0;
    do {
        s = 0.0;
        for (int i = 0; i < k; ++i) {
            g[i] = rng.normal();
            s += g[i] * g[i];
        }
    } while (s == 0.0);
    g /= std::sqrt(s);
    x.noalias() = basis.transpose() * g;
    return PExponent::lp_norm({x.data(), static_cast<std::size_t>(x.size())}, p);
}

// |B^T g|_p^p for g ~ N(0, I_k).
double gaussian_pnorm_pow(const Eigen::MatrixXd& basis, double p, Rng& rng, Eigen::VectorXd& g,
                          Eigen::VectorXd& x) {
    const int k = static_cast<int>(basis.rows());
    for (int i = 0; i < k; ++i) g[i] = rng.normal();
    x.noalias() = basis.transpose() * g;
    return PExponent::norm_pow({x.data(), static_cast<std::size_t>(x.size())}, p);
}

void check_samples(std::size_t samples) {
    if (samples < 1000) throw std::invalid_argument("sections: need at least 10^3 samples");
}

} // namespace

double section_pmoment_exact(int k, double p) {
    if (k < 1) throw std::invalid_argument("section_pmoment_exact: k >= 1");
    check_p(p);
    return static_cast<double>(k) * specfun::gauss_abs_moment(p);
}

double gauss_norm_moment(int k, double beta) {
    if (k < 1) throw std::invalid_argument("gauss_norm_moment: k >= 1");
    if (!(beta > -static_cast<double>(k)))
        throw std::domain_error("gauss_norm_moment: requires beta > -k");
    return std::exp(0.5 * beta * std::log(2.0) + specfun::log_gamma(0.5 * (k + beta)) -
                    specfun::log_gamma(0.5 * k));
}

double laplace_pnorm_exact(int k, double p, double coef) {
    if (k < 1) throw std::invalid_argument("laplace_pnorm_exact: k >= 1");
    check_p(p);
    if (!(coef >= 0.0)) throw std::invalid_argument("laplace_pnorm_exact: coef >= 0");
    if (coef == 0.0) return 1.0;
    const double one_d = specfun::alpha(p, coef * std::pow(2.0, 0.5 * p)) / kSqrtPi;
    return std::pow(one_d, k);
}

double cube_gaussian_exact(int k, double r) {
    if (k < 1) throw std::invalid_argument("cube_gaussian_exact: k >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("cube_gaussian_exact: r > 0");
    return std::pow(specfun::theta(r) / kSqrt2Pi, k);
}

Estimate section_moment(const Subspace& E, double p, double beta, std::size_t samples,
                        RngState state) {
    check_p(p);
    const int k = E.dim();
    if (!(beta > -static_cast<double>(k)))
        throw std::domain_error("section_moment: beta must be > -k for finiteness");
    if (beta == 0.0) return {1.0, 0.0, samples, state, false};
    check_samples(samples);

    Rng rng(state);
    Eigen::VectorXd g(k), x(E.ambient_dim());
    MeanAccumulator acc;
    for (std::size_t i = 0; i < samples; ++i) {
        const double c = direction_pnorm(E.basis(), p, rng, g, x);
        acc.add(std::pow(c, beta));
    }
    const double radial = gauss_norm_moment(k, beta);
    Estimate e = acc.estimate(state);
    e.value *= radial;
    e.std_error *= radial;
    return e;
}

Estimate section_pmoment_ratio(const Subspace& E, double p, std::size_t samples, RngState state) {
    Estimate e = section_moment(E, p, p, samples, state);
    const double denom = section_pmoment_exact(E.dim(), p);
    e.value /= denom;
    e.std_error /= denom;
    return e;
}

std::vector<Estimate> section_pmoment_ratio_scan(const Subspace& E, std::span<const double> ps,
                                                 std::size_t samples, RngState state) {
    for (double p : ps) check_p(p);
    check_samples(samples);
    const int k = E.dim();
    Rng rng(state);
    Eigen::VectorXd g(k), x(E.ambient_dim());
    std::vector<MeanAccumulator> acc(ps.size());
    for (std::size_t i = 0; i < samples; ++i) {
        // one directional draw shared by the whole p grid
        double s = 0.0;
        do {
            s = 0.0;
            for (int j = 0; j < k; ++j) {
                g[j] = rng.normal();
                s += g[j] * g[j];
            }
        } while (s == 0.0);
        g /= std::sqrt(s);
        x.noalias() = E.basis().transpose() * g;
        for (std::size_t q = 0; q < ps.size(); ++q) {
            const double c = PExponent::lp_norm({x.data(), static_cast<std::size_t>(x.size())}, ps[q]);
            acc[q].add(std::pow(c, ps[q]));
        }
    }
    std::vector<Estimate> out;
    out.reserve(ps.size());
    for (std::size_t q = 0; q < ps.size(); ++q) {
        const double radial = gauss_norm_moment(k, ps[q]);
        const double denom = section_pmoment_exact(k, ps[q]);
        Estimate e = acc[q].estimate(state);
        e.value *= radial / denom;
        e.std_error *= radial / denom;
        out.push_back(e);
    }
    return out;
}

Estimate laplace_functional(const Subspace& E, double p, double lambda, double theta_exp,
                            std::size_t samples, RngState state) {
    check_p(p);
    if (!(lambda >= 0.0)) throw std::invalid_argument("laplace_functional: lambda >= 0");
    if (!(theta_exp > 0.0) || theta_exp > 1.0)
        throw std::invalid_argument("laplace_functional: theta_exp in (0, 1]");
    if (lambda == 0.0) return {1.0, 0.0, samples, state, false};
    check_samples(samples);
    Rng rng(state);
    Eigen::VectorXd g(E.dim()), x(E.ambient_dim());
    MeanAccumulator acc;
    for (std::size_t i = 0; i < samples; ++i) {
        const double v = gaussian_pnorm_pow(E.basis(), p, rng, g, x);
        acc.add(std::exp(-lambda * std::pow(v, theta_exp)));
    }
    return acc.estimate(state);
}

Estimate normalized_laplace_ratio(const Subspace& E, double p, double lambda, std::size_t samples,
                                  RngState state) {
    check_p(p);
    if (!(lambda > 0.0)) throw std::invalid_argument("normalized_laplace_ratio: lambda > 0");
    const double coef =
        lambda / (std::pow(2.0, 0.5 * p) * std::exp(specfun::log_gamma(0.5 * (p + 1.0))));
    Estimate num = [&] {
        check_samples(samples);
        Rng rng(state);
        Eigen::VectorXd g(E.dim()), x(E.ambient_dim());
        MeanAccumulator acc;
        for (std::size_t i = 0; i < samples; ++i)
            acc.add(std::exp(-coef * gaussian_pnorm_pow(E.basis(), p, rng, g, x)));
        return acc.estimate(state);
    }();
    const double denom = laplace_pnorm_exact(E.dim(), p, coef);
    num.value /= denom;
    num.std_error /= denom;
    return num;
}

std::vector<ScanPoint> laplace_ratio_scan(const Subspace& E, double p,
                                          std::span<const double> lambdas, std::size_t samples,
                                          RngState state) {
    check_p(p);
    check_samples(samples);
    Rng rng(state);
    Eigen::VectorXd g(E.dim()), x(E.ambient_dim());
    std::vector<double> pows(samples);
    for (std::size_t i = 0; i < samples; ++i)
        pows[i] = gaussian_pnorm_pow(E.basis(), p, rng, g, x);

    std::vector<ScanPoint> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("laplace_ratio_scan: lambda >= 0");
        ScanPoint pt;
        pt.x = lambda;
        if (lambda == 0.0) {
            pt.est = {1.0, 0.0, samples, state, false};
        } else {
            MeanAccumulator acc;
            for (double v : pows) acc.add(std::exp(-lambda * v));
            Estimate e = acc.estimate(state);
            const double denom = laplace_pnorm_exact(E.dim(), p, lambda);
            e.value /= denom;
            e.std_error /= denom;
            pt.est = e;
        }
        out.push_back(pt);
    }
    return out;
}

Estimate cube_section_gaussian(const Subspace& E, double r, std::size_t samples, RngState state) {
    if (!(r > 0.0)) throw std::invalid_argument("cube_section_gaussian: r > 0");
    check_samples(samples);
    Rng rng(state);
    Eigen::VectorXd g(E.dim()), x(E.ambient_dim());
    MeanAccumulator acc;
    for (std::size_t i = 0; i < samples; ++i) {
        for (int j = 0; j < E.dim(); ++j) g[j] = rng.normal();
        x.noalias() = E.basis().transpose() * g;
        acc.add(x.cwiseAbs().maxCoeff() <= r ? 1.0 : 0.0);
    }
    return acc.estimate(state);
}

std::vector<ScanPoint> cube_ratio_scan(const Subspace& E, std::span<const double> rs,
                                       std::size_t samples, RngState state) {
    check_samples(samples);
    Rng rng(state);
    Eigen::VectorXd g(E.dim()), x(E.ambient_dim());
    std::vector<double> sups(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        for (int j = 0; j < E.dim(); ++j) g[j] = rng.normal();
        x.noalias() = E.basis().transpose() * g;
        sups[i] = x.cwiseAbs().maxCoeff();
    }
    std::sort(sups.begin(), sups.end());
    std::vector<ScanPoint> out;
    out.reserve(rs.size());
    for (double r : rs) {
        if (!(r > 0.0)) throw std::invalid_argument("cube_ratio_scan: r > 0");
        const auto it = std::upper_bound(sups.begin(), sups.end(), r);
        const double phat = static_cast<double>(it - sups.begin()) / static_cast<double>(samples);
        const double se = std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
        const double denom = cube_gaussian_exact(E.dim(), r);
        ScanPoint pt;
        pt.x = r;
        pt.est = {phat / denom, se / denom, samples, state, phat == 0.0};
        out.push_back(pt);
    }
    return out;
}

bool scan_monotone_within_ci(std::span<const ScanPoint> points, int direction, double z) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("scan_monotone_within_ci: direction is +1 or -1");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double band = z * std::hypot(points[i].est.std_error, points[j].est.std_error);
            const double diff = points[j].est.value - points[i].est.value;
            if (direction < 0 && diff > band) return false;   // later exceeds earlier
            if (direction > 0 && -diff > band) return false;  // later falls below earlier
        }
    return true;
}

namespace {
BoundCheck make_upper_check(const Estimate& est, double bound, double bound_se, double z) {
    BoundCheck c;
    c.estimate = est.value;
    c.estimate_se = est.std_error;
    c.bound = bound;
    c.bound_se = bound_se;
    const double se = std::hypot(est.std_error, bound_se);
    c.slack_sigma = se > 0.0 ? (bound - est.value) / se
                             : (bound - est.value >= 0.0 ? std::numeric_limits<double>::infinity()
                                                         : -std::numeric_limits<double>::infinity());
    c.pass = est.value <= bound + z * se + 1e-12;
    return c;
}

BoundCheck make_lower_check(const Estimate& est, double bound, double bound_se, double z) {
    BoundCheck c;
    c.estimate = est.value;
    c.estimate_se = est.std_error;
    c.bound = bound;
    c.bound_se = bound_se;
    const double se = std::hypot(est.std_error, bound_se);
    c.slack_sigma = se > 0.0 ? (est.value - bound) / se
                             : (est.value - bound >= 0.0 ? std::numeric_limits<double>::infinity()
                                                         : -std::numeric_limits<double>::infinity());
    c.pass = est.value >= bound - z * se - 1e-12;
    return c;
}
} // namespace

BoundCheck cube_upper_bound_check(const Subspace& E, double r, double z, std::size_t samples,
                                  RngState state) {
    const Estimate est = cube_section_gaussian(E, r, samples, state);
    const double scale = std::sqrt(static_cast<double>(E.ambient_dim()) / E.dim());
    return make_upper_check(est, cube_gaussian_exact(E.dim(), r * scale), 0.0, z);
}

BoundCheck cube_lower_bound_check(const Subspace& E, double r, double z, std::size_t samples,
                                  RngState state) {
    const Estimate est = cube_section_gaussian(E, r, samples, state);
    return make_lower_check(est, cube_gaussian_exact(E.dim(), r), 0.0, z);
}

BoundCheck laplace_upper_bound_check(const Subspace& E, double p, double lambda, double z,
                                     std::size_t samples, RngState state) {
    if (!(p >= 2.0)) throw std::invalid_argument("laplace_upper_bound_check: p >= 2");
    if (!(lambda >= 0.0)) throw std::invalid_argument("laplace_upper_bound_check: lambda >= 0");
    const Estimate est = laplace_functional(E, p, lambda, 1.0, samples, state);
    const double ratio = static_cast<double>(E.dim()) / E.ambient_dim();
    const double coef = lambda * std::pow(std::sqrt(ratio), p - 2.0);
    return make_upper_check(est, laplace_pnorm_exact(E.dim(), p, coef), 0.0, z);
}

MomentBoundReport bl_moment_bounds_check(const Subspace& E, double p, double beta,
                                         double alpha_neg, double z, std::size_t samples,
                                         RngState state) {
    if (!(p >= 2.0)) throw std::invalid_argument("bl_moment_bounds_check: p >= 2");
    if (beta < 0.0 || beta > p) throw std::invalid_argument("bl_moment_bounds_check: beta in [0, p]");
    if (alpha_neg < 0.0 || alpha_neg >= E.dim())
        throw std::invalid_argument("bl_moment_bounds_check: alpha in [0, k)");
    const int k = E.dim();
    const double kn = static_cast<double>(k) / E.ambient_dim();
    const Subspace full = Subspace::axis(k, k);

    MomentBoundReport rep;
    {
        const Estimate lhs = section_moment(E, p, beta, samples, state.with_stream(state.stream * 4 + 1));
        const Estimate rhs = section_moment(full, p, beta, samples, state.with_stream(state.stream * 4 + 2));
        const double factor = std::pow(kn, beta * (0.5 - 1.0 / p));
        rep.positive = make_lower_check(lhs, factor * rhs.value, factor * rhs.std_error, z);
    }
    {
        const Estimate lhs =
            section_moment(E, p, -alpha_neg, samples, state.with_stream(state.stream * 4 + 3));
        const Estimate rhs =
            section_moment(full, p, -alpha_neg, samples, state.with_stream(state.stream * 4 + 4));
        const double factor = std::pow(1.0 / kn, alpha_neg * (0.5 - 1.0 / p));
        rep.negative = make_upper_check(lhs, factor * rhs.value, factor * rhs.std_error, z);
    }
    rep.pass = rep.positive.pass && rep.negative.pass;
    return rep;
}

MomentOrderReport section_moment_order_check(const Subspace& E, double p, double alpha_neg,
                                             double beta, double z, std::size_t samples,
                                             RngState state) {
    check_p(p);
    if (!(alpha_neg > 0.0) || !(alpha_neg < E.dim()))
        throw std::invalid_argument("section_moment_order_check: alpha in (0, k)");
    if (!(beta > 0.0) || !(beta <= p))
        throw std::invalid_argument("section_moment_order_check: beta in (0, p]");
    const int k = E.dim();
    const Subspace full = Subspace::axis(k, k);

    const Estimate neg_e = section_moment(E, p, -alpha_neg, samples, state.with_stream(state.stream * 4 + 1));
    const Estimate neg_f = section_moment(full, p, -alpha_neg, samples, state.with_stream(state.stream * 4 + 2));
    const Estimate pos_e = section_moment(E, p, beta, samples, state.with_stream(state.stream * 4 + 3));
    const Estimate pos_f = section_moment(full, p, beta, samples, state.with_stream(state.stream * 4 + 4));

    MomentOrderReport rep;
    if (p < 2.0)
        rep.expected_direction = +1;
    else if (p > 2.0)
        rep.expected_direction = -1;
    else
        rep.expected_direction = 0;

    if (rep.expected_direction > 0) {
        rep.negative = make_upper_check(neg_e, neg_f.value, neg_f.std_error, z);
        rep.positive = make_lower_check(pos_e, pos_f.value, pos_f.std_error, z);
    } else if (rep.expected_direction < 0) {
        rep.negative = make_lower_check(neg_e, neg_f.value, neg_f.std_error, z);
        rep.positive = make_upper_check(pos_e, pos_f.value, pos_f.std_error, z);
    } else {
        // p = 2: the two laws coincide, both comparisons are equalities
        rep.negative = make_upper_check(neg_e, neg_f.value, neg_f.std_error, z);
        rep.positive = make_upper_check(pos_e, pos_f.value, pos_f.std_error, z);
        rep.negative.pass = std::abs(neg_e.value - neg_f.value) <=
                            z * std::hypot(neg_e.std_error, neg_f.std_error) + 1e-12;
        rep.positive.pass = std::abs(pos_e.value - pos_f.value) <=
                            z * std::hypot(pos_e.std_error, pos_f.std_error) + 1e-12;
    }
    rep.pass = rep.negative.pass && rep.positive.pass;
    return rep;
}

namespace {

// E exp(-mu 2^{p/2} R^p / 2^{p/2}) with R = |G|_2 on R^k, i.e. the radial
// Laplace factor phi_k(mu) = E exp(-mu |t G|...): written as
// (2/Gamma(k/2)) int_0^inf exp(-mu 2^{p/2} t^p - t^2) t^{k-1} dt.
double radial_laplace_factor(int k, double p, double mu, const QuadratureSpec& spec) {
    if (mu == 0.0) return 1.0;
    const double scale = mu * std::pow(2.0, 0.5 * p);
    auto f = [p, scale, k](double t) {
        return std::exp(-scale * std::pow(t, p) - t * t) * std::pow(t, k - 1);
    };
    const double integral = integrate_to_inf_or_throw(f, 0.0, spec);
    return 2.0 * integral / std::exp(specfun::log_gamma(0.5 * k));
}

// Neville extrapolation to h = 0; returns the value and the last correction.
std::pair<double, double> neville_to_zero(std::span<const double> hs, std::span<const double> ys) {
    const std::size_t n = hs.size();
    std::vector<double> t(ys.begin(), ys.end());
    double last = t[0], prev = t[0];
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < n - j; ++i)
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * hs[i + j] / (hs[i] - hs[i + j]);
        prev = last;
        last = t[0];
    }
    return {last, std::abs(last - prev)};
}

} // namespace

VolumeRatioEstimate volume_ratio(const Subspace& E, double p, std::size_t samples, RngState state) {
    check_p(p);
    VolumeRatioEstimate out;
    if (E.dim() == E.ambient_dim()) {
        out.est = {1.0, 0.0, samples, state, false};
        return out;
    }
    check_samples(samples);
    const int k = E.dim();
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;

    // lambda grid chosen so the expansion variable h = lambda^{-2/p} is small
    std::vector<double> lambdas;
    for (double l = 8.0; lambdas.size() < 4; l *= 2.0) lambdas.push_back(l);
    std::vector<double> hs;
    for (double l : lambdas) hs.push_back(std::pow(l, -2.0 / p));

    std::vector<double> denom;
    for (double l : lambdas) denom.push_back(laplace_pnorm_exact(k, p, l));

    const std::size_t batches = 20;
    const std::size_t per_batch = std::max<std::size_t>(samples / batches, 50);
    Rng rng(state);
    Eigen::VectorXd g(k), x(E.ambient_dim());

    std::vector<double> batch_values;
    std::vector<double> grand_num(lambdas.size(), 0.0);
    std::vector<ScanPoint> scan(lambdas.size());
    for (std::size_t b = 0; b < batches; ++b) {
        std::vector<double> num(lambdas.size(), 0.0);
        for (std::size_t i = 0; i < per_batch; ++i) {
            const double c = direction_pnorm(E.basis(), p, rng, g, x);
            const double cp = std::pow(c, p);
            for (std::size_t j = 0; j < lambdas.size(); ++j)
                num[j] += radial_laplace_factor(k, p, lambdas[j] * cp, spec);
        }
        std::vector<double> ratios(lambdas.size());
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            ratios[j] = num[j] / static_cast<double>(per_batch) / denom[j];
            grand_num[j] += num[j];
        }
        batch_values.push_back(neville_to_zero(hs, ratios).first);
    }

    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        scan[j].x = lambdas[j];
        scan[j].est.value = grand_num[j] / static_cast<double>(batches * per_batch) / denom[j];
        scan[j].est.samples = batches * per_batch;
        scan[j].est.seed = state;
    }
    std::vector<double> grand_ratios;
    for (std::size_t j = 0; j < lambdas.size(); ++j) grand_ratios.push_back(scan[j].est.value);
    const auto [value, residual] = neville_to_zero(hs, grand_ratios);

    double mean = 0.0;
    for (double v : batch_values) mean += v;
    mean /= static_cast<double>(batch_values.size());
    double ss = 0.0;
    for (double v : batch_values) ss += (v - mean) * (v - mean);
    const double se =
        std::sqrt(ss / (static_cast<double>(batch_values.size()) - 1.0) / static_cast<double>(batch_values.size()));

    out.est.value = value;
    out.est.std_error = std::hypot(se, residual);
    out.est.samples = batches * per_batch;
    out.est.seed = state;
    out.est.flagged = residual > 10.0 * std::max(se, 1e-12);  // extrapolation instability
    out.extrapolation_residual = residual;
    out.scan = std::move(scan);
    return out;
}

TiltedDensity::TiltedDensity(double p_, double lambda_, const QuadratureSpec& spec)
    : p(p_), lambda(lambda_) {
    check_p(p);
    if (!(lambda > 0.0)) throw std::invalid_argument("TiltedDensity: lambda > 0");
    alpha = specfun::alpha(p, lambda, spec);
}

double TiltedDensity::density(double t) const {
    const double at = std::abs(t);
    return std::exp(-lambda * std::pow(alpha, p) * std::pow(at, p) - alpha * alpha * t * t);
}

double TiltedDensity::interval_mass(double a, const QuadratureSpec& spec) const {
    if (!(a >= 0.0)) throw std::invalid_argument("TiltedDensity: a >= 0");
    if (a == 0.0) return 0.0;
    return 2.0 * integrate_or_throw([this](double t) { return density(t); }, 0.0, a, spec);
}

double TiltedDensity::total_mass(const QuadratureSpec& spec) const {
    return 2.0 * integrate_to_inf_or_throw([this](double t) { return density(t); }, 0.0, spec);
}

CubeDensity::CubeDensity(double r_) : r(r_) {
    if (!(r > 0.0)) throw std::invalid_argument("CubeDensity: r > 0");
    theta_r = specfun::theta(r);
}

double CubeDensity::density(double t) const {
    if (std::abs(t) > r / theta_r) return 0.0;
    return std::exp(-0.5 * theta_r * theta_r * t * t);
}

double CubeDensity::interval_mass(double a) const {
    if (!(a >= 0.0)) throw std::invalid_argument("CubeDensity: a >= 0");
    if (a == 0.0) return 0.0;
    const double b = std::min(a, r / theta_r);
    // int_{-b}^{b} e^{-theta^2 t^2 / 2} dt = theta(b * theta_r) / theta_r
    return specfun::theta(b * theta_r) / theta_r;
}

PeakedOrder predict_peaked_order(const TiltedDensity& d1, const TiltedDensity& d2) {
    if (d1.p == d2.p) {
        if (d1.lambda == d2.lambda || d1.p == 2.0) return PeakedOrder::equal;
        if (d1.p < 2.0)  // larger lambda is less peaked
            return d1.lambda > d2.lambda ? PeakedOrder::first_below : PeakedOrder::second_below;
        // p > 2: smaller lambda is less peaked
        return d1.lambda < d2.lambda ? PeakedOrder::first_below : PeakedOrder::second_below;
    }
    const bool first_is_lo = d1.p < d2.p;
    const TiltedDensity& lo = first_is_lo ? d1 : d2;
    const TiltedDensity& hi = first_is_lo ? d2 : d1;
    bool lo_below = false;
    if (lo.p < 2.0 && hi.p >= 2.0)
        lo_below = true;  // unconditional in the lambdas
    else if (hi.p >= 2.0 && lo.alpha > hi.alpha)
        lo_below = true;
    else if (hi.p < 2.0 && lo.alpha < hi.alpha)
        lo_below = true;
    else
        return PeakedOrder::none;
    return (lo_below == first_is_lo) ? PeakedOrder::first_below : PeakedOrder::second_below;
}

PeakedCompareReport peaked_compare(const TiltedDensity& d1, const TiltedDensity& d2,
                                   std::span<const double> a_grid, double tol) {
    PeakedCompareReport rep;
    rep.predicted = predict_peaked_order(d1, d2);
    rep.asserted = rep.predicted != PeakedOrder::none;
    rep.pass = true;
    for (double a : a_grid) {
        PeakedCompareRow row;
        row.a = a;
        row.mass1 = d1.interval_mass(a);
        row.mass2 = d2.interval_mass(a);
        switch (rep.predicted) {
            case PeakedOrder::first_below:
                if (row.mass1 > row.mass2 + tol) rep.pass = false;
                break;
            case PeakedOrder::second_below:
                if (row.mass2 > row.mass1 + tol) rep.pass = false;
                break;
            case PeakedOrder::equal:
                if (std::abs(row.mass1 - row.mass2) > tol) rep.pass = false;
                break;
            case PeakedOrder::none:
                break;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

AlphaComparison normalized_alpha_comparison(double p, double q, double lambda,
                                            const QuadratureSpec& spec) {
    if (!(p > 0.0) || !(p < q) || !std::isfinite(q))
        throw std::invalid_argument("normalized_alpha_comparison: need 0 < p < q < inf");
    if (!(lambda > 0.0)) throw std::invalid_argument("normalized_alpha_comparison: lambda > 0");
    AlphaComparison cmp;
    cmp.lhs = specfun::alpha(p, lambda / std::exp(specfun::log_gamma(0.5 * (p + 1.0))), spec);
    cmp.rhs = specfun::alpha(q, lambda / std::exp(specfun::log_gamma(0.5 * (q + 1.0))), spec);
    cmp.strict = cmp.lhs < cmp.rhs;
    return cmp;
}

std::vector<ConvexFn> default_convex_family() {
    return {
        {"linear", [](double t) { return t; }},
        {"square", [](double t) { return t * t; }},
        {"hinge", [](double t) { return std::max(t - 1.0, 0.0); }},
        {"centered-square", [](double t) { return (t - 1.0) * (t - 1.0); }},
    };
}

ConvexOrderReport power_convex_order_check(const std::function<double(Rng&)>& sampler, double p,
                                           double q, std::span<const ConvexFn> fs, double z,
                                           std::size_t samples, RngState state) {
    if (!(p > 0.0) || !(p < q)) throw std::invalid_argument("power_convex_order_check: 0 < p < q");
    check_samples(samples);
    Rng rng(state);
    std::vector<double> xp(samples), xq(samples);
    double mp = 0.0, mq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = sampler(rng);
        if (x < 0.0) throw std::invalid_argument("power_convex_order_check: sampler must be nonnegative");
        xp[i] = std::pow(x, p);
        xq[i] = std::pow(x, q);
        mp += xp[i];
        mq += xq[i];
    }
    mp /= static_cast<double>(samples);
    mq /= static_cast<double>(samples);
    if (!(mp > 0.0) || !(mq > 0.0))
        throw std::runtime_error("power_convex_order_check: degenerate sample (zero moment)");

    ConvexOrderReport rep;
    rep.pass = true;
    for (const auto& fn : fs) {
        MeanAccumulator diff, lhs, rhs;
        for (std::size_t i = 0; i < samples; ++i) {
            const double a = fn.f(xp[i] / mp);
            const double b = fn.f(xq[i] / mq);
            lhs.add(a);
            rhs.add(b);
            diff.add(a - b);
        }
        ConvexOrderRow row;
        row.name = fn.name;
        row.lhs = lhs.mean();
        row.rhs = rhs.mean();
        row.margin_se = diff.std_error();
        row.pass = diff.mean() <= z * diff.std_error() + 1e-12;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

double bl_profile(double s, double p, double lambda, const QuadratureSpec& spec) {
    if (!(s > 0.0)) throw std::invalid_argument("bl_profile: s > 0");
    check_p(p);
    auto f = [s, p, lambda](double t) {
        return std::exp(-lambda * std::pow(s, 2.0 - p) * std::pow(t, p) - 0.5 * t * t);
    };
    return 2.0 * integrate_to_inf_or_throw(f, 0.0, spec);
}

} // namespace lpball::sections
