#include "lpball/slabs.hpp"

#include "lpball/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lpball::slabs {

SlabSpec::SlabSpec(std::vector<double> s, Orientation o) : thresholds(std::move(s)), orientation(o) {
    if (thresholds.empty()) throw std::invalid_argument("SlabSpec: empty thresholds");
    for (double t : thresholds)
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("SlabSpec: thresholds must be in [0, 1]");
}

namespace {

// Streaming mean/covariance of the vector (J, f_1, ..., f_n) followed by the
// delta method for D = mean(J) - prod_k mean(f_k). The shared pool makes J
// and the marginal terms positively correlated, which sharpens the one-sided
// margin test; the covariance below accounts for that.
class ProductMarginAccumulator {
public:
    explicit ProductMarginAccumulator(std::size_t n) : n_(n), sum_(n + 1, 0.0),
        sum2_((n + 1) * (n + 1), 0.0) {}

    void add(double joint, std::span<const double> terms) {
        buf_.assign(1, joint);
        buf_.insert(buf_.end(), terms.begin(), terms.end());
        ++count_;
        for (std::size_t i = 0; i <= n_; ++i) {
            sum_[i] += buf_[i];
            for (std::size_t j = i; j <= n_; ++j) sum2_[i * (n_ + 1) + j] += buf_[i] * buf_[j];
        }
    }

    std::uint64_t count() const { return count_; }

    struct Result {
        double joint, joint_se;
        double product, product_se;
        double margin, margin_se;
    };

    Result finish() const {
        if (count_ < 2) throw std::logic_error("ProductMarginAccumulator: too few samples");
        const double n = static_cast<double>(count_);
        const std::size_t d = n_ + 1;
        std::vector<double> mean(d);
        for (std::size_t i = 0; i < d; ++i) mean[i] = sum_[i] / n;
        auto cov = [&](std::size_t i, std::size_t j) {
            const std::size_t a = std::min(i, j), b = std::max(i, j);
            return (sum2_[a * d + b] - n * mean[a] * mean[b]) / (n - 1.0);
        };
        // gradient of D = m_0 - prod_{k>=1} m_k
        std::vector<double> grad(d, 0.0);
        grad[0] = 1.0;
        double product = 1.0;
        for (std::size_t k = 1; k < d; ++k) product *= mean[k];
        for (std::size_t k = 1; k < d; ++k) {
            double g = 1.0;
            for (std::size_t l = 1; l < d; ++l)
                if (l != k) g *= mean[l];
            grad[k] = -g;
        }
        double var_d = 0.0, var_p = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                var_d += grad[i] * grad[j] * cov(i, j);
                if (i > 0 && j > 0) var_p += grad[i] * grad[j] * cov(i, j);
            }
        Result r;
        r.joint = mean[0];
        r.joint_se = std::sqrt(std::max(cov(0, 0), 0.0) / n);
        r.product = product;
        r.product_se = std::sqrt(std::max(var_p, 0.0) / n);
        r.margin = mean[0] - product;
        r.margin_se = std::sqrt(std::max(var_d, 0.0) / n);
        return r;
    }

private:
    std::size_t n_;
    std::uint64_t count_ = 0;
    std::vector<double> sum_;
    std::vector<double> sum2_;
    mutable std::vector<double> buf_;
};

// Indicator specialization: exact count-based covariance of
// (J, M_1, ..., M_n). J * M_k = J because the joint event implies every
// marginal one, so Cov(J, M_k) = J(1 - m_k) without extra counting.
SlabEstimates stats_from_pool(std::span<const double> pool, int n, const SlabSpec& slab,
                              std::size_t samples, RngState state) {
    if (slab.thresholds.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("slab thresholds/dimension mismatch");
    if (n > 63) throw std::invalid_argument("slab statistics support n <= 63");

    const std::size_t un = static_cast<std::size_t>(n);
    std::uint64_t joint_count = 0;
    std::vector<std::uint64_t> coord(un, 0);
    std::vector<std::uint64_t> pair(un * un, 0);
    std::vector<int> cleared(un);

    for (std::size_t i = 0; i < samples; ++i) {
        const double* x = pool.data() + i * un;
        int nc = 0;
        for (int k = 0; k < n; ++k) {
            const double v = std::abs(x[k]);
            const double s = slab.thresholds[static_cast<std::size_t>(k)];
            if (slab.orientation == Orientation::outer ? v >= s : v <= s)
                cleared[static_cast<std::size_t>(nc++)] = k;
        }
        if (nc == n) ++joint_count;
        for (int a = 0; a < nc; ++a) {
            const std::size_t ka = static_cast<std::size_t>(cleared[static_cast<std::size_t>(a)]);
            ++coord[ka];
            for (int b = a + 1; b < nc; ++b)
                ++pair[ka * un + static_cast<std::size_t>(cleared[static_cast<std::size_t>(b)])];
        }
    }

    const double N = static_cast<double>(samples);
    const double jbar = static_cast<double>(joint_count) / N;
    std::vector<double> m(un);
    for (std::size_t k = 0; k < un; ++k) m[k] = static_cast<double>(coord[k]) / N;
    auto pair_mean = [&](std::size_t a, std::size_t b) {
        if (a == b) return m[a];
        const std::size_t lo = std::min(a, b), hi = std::max(a, b);
        return static_cast<double>(pair[lo * un + hi]) / N;
    };

    double product = 1.0;
    for (std::size_t k = 0; k < un; ++k) product *= m[k];
    std::vector<double> grad(un);
    for (std::size_t k = 0; k < un; ++k) {
        double g = 1.0;
        for (std::size_t l = 0; l < un; ++l)
            if (l != k) g *= m[l];
        grad[k] = g;
    }

    // Var(J - prod) = Var(J) - 2 sum_k g_k Cov(J, M_k) + sum_{k,l} g_k g_l Cov(M_k, M_l)
    double var_j = jbar * (1.0 - jbar);
    double var_p = 0.0, cov_jp = 0.0;
    for (std::size_t k = 0; k < un; ++k) {
        cov_jp += grad[k] * jbar * (1.0 - m[k]);
        for (std::size_t l = 0; l < un; ++l)
            var_p += grad[k] * grad[l] * (pair_mean(k, l) - m[k] * m[l]);
    }
    const double var_d = std::max(var_j - 2.0 * cov_jp + var_p, 0.0);

    SlabEstimates out;
    out.joint = {jbar, std::sqrt(var_j / N), samples, state, false};
    out.product = {product, std::sqrt(std::max(var_p, 0.0) / N), samples, state, false};
    out.margin = jbar - product;
    out.margin_se = std::sqrt(var_d / N);
    out.below_resolution = joint_count == 0;
    out.joint.flagged = out.below_resolution;
    return out;
}

} // namespace

SlabEstimates slab_probabilities(const sampling::BallMeasure& measure, const SlabSpec& slab,
                                 std::size_t samples, RngState state) {
    if (samples < 1000) throw std::invalid_argument("slab_probabilities: need at least 10^3 samples");
    Rng rng(state);
    const auto pool = sampling::sample_matrix(measure, samples, rng);
    return stats_from_pool(pool, measure.n, slab, samples, state);
}

Estimate joint_slab_prob(const sampling::BallMeasure& measure, const SlabSpec& slab,
                         std::size_t samples, RngState state) {
    return slab_probabilities(measure, slab, samples, state).joint;
}

Estimate product_slab_prob(const sampling::BallMeasure& measure, const SlabSpec& slab,
                           std::size_t samples, RngState state) {
    return slab_probabilities(measure, slab, samples, state).product;
}

SubindependenceReport subindependence_verdict(const sampling::BallMeasure& measure,
                                              std::span<const SlabSpec> grid, double z,
                                              std::size_t samples, RngState state) {
    if (grid.empty()) throw std::invalid_argument("subindependence_verdict: empty grid");
    if (samples < 1000) throw std::invalid_argument("subindependence_verdict: need at least 10^3 samples");
    Rng rng(state);
    const auto pool = sampling::sample_matrix(measure, samples, rng);

    SubindependenceReport report;
    report.measure = measure;
    report.z = z;
    report.pass = true;
    report.min_margin_sigma = std::numeric_limits<double>::infinity();
    for (const SlabSpec& slab : grid) {
        SlabGridPoint pt;
        pt.slab = slab;
        pt.est = stats_from_pool(pool, measure.n, slab, samples, state);
        // one-sided: the claim is joint <= product, so only an excess fails
        pt.pass = pt.est.margin <= z * pt.est.margin_se;
        if (pt.est.margin_se > 0.0)
            report.min_margin_sigma = std::min(report.min_margin_sigma, -pt.est.margin / pt.est.margin_se);
        report.pass = report.pass && pt.pass;
        report.points.push_back(std::move(pt));
    }
    return report;
}

double bonferroni_z(std::size_t family_size, double family_level) {
    if (family_size == 0) throw std::invalid_argument("bonferroni_z: empty family");
    return stats::normal_quantile(1.0 - family_level / static_cast<double>(family_size));
}

std::vector<SlabSpec> quantile_slab_grid(const sampling::BallMeasure& measure,
                                         std::span<const double> quantiles, Orientation orientation,
                                         std::size_t pilot_samples, RngState state) {
    Rng rng(state);
    const auto pool = sampling::sample_matrix(measure, pilot_samples, rng);
    // marginal quantiles of |x_1| (all coordinates share this marginal)
    std::vector<double> firsts(pilot_samples);
    for (std::size_t i = 0; i < pilot_samples; ++i)
        firsts[i] = std::abs(pool[i * static_cast<std::size_t>(measure.n)]);
    std::sort(firsts.begin(), firsts.end());
    auto marginal_quantile = [&](double u) {
        const std::size_t idx = std::min(static_cast<std::size_t>(u * pilot_samples),
                                         pilot_samples - 1);
        return std::clamp(firsts[idx], 0.0, 1.0);
    };

    const std::size_t n = static_cast<std::size_t>(measure.n);
    std::vector<SlabSpec> grid;
    if (orientation == Orientation::inner) {
        for (double u : quantiles)
            grid.emplace_back(std::vector<double>(n, marginal_quantile(u)), orientation);
        // staircase across the quantile list
        std::vector<double> stair(n);
        for (std::size_t i = 0; i < n; ++i) stair[i] = marginal_quantile(quantiles[i % quantiles.size()]);
        grid.emplace_back(std::move(stair), orientation);
    } else {
        // outer slabs become geometrically incompatible when every coordinate
        // must be large, so keep most thresholds at 0 (trivially cleared)
        for (double u : quantiles) {
            std::vector<double> s(n, 0.0);
            s[0] = s[n > 1 ? 1 : 0] = marginal_quantile(u);
            grid.emplace_back(std::move(s), orientation);
        }
        std::vector<double> stair(n, 0.0);
        for (std::size_t i = 0; i < std::min<std::size_t>(3, n); ++i)
            stair[i] = marginal_quantile(quantiles[i % quantiles.size()]);
        grid.emplace_back(std::move(stair), orientation);
    }
    return grid;
}

StepFunction::StepFunction(std::vector<double> k, std::vector<double> v)
    : knots(std::move(k)), values(std::move(v)) {
    if (values.size() != knots.size() + 1)
        throw std::invalid_argument("StepFunction: need knots.size()+1 values");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1])) throw std::invalid_argument("StepFunction: knots not increasing");
    for (double v2 : values)
        if (v2 < 0.0) throw std::invalid_argument("StepFunction: values must be nonnegative");
}

StepFunction StepFunction::indicator_above(double s) { return StepFunction({s}, {0.0, 1.0}); }
StepFunction StepFunction::indicator_below(double s) { return StepFunction({s}, {1.0, 0.0}); }

double StepFunction::operator()(double x) const {
    std::size_t i = 0;
    while (i < knots.size() && x >= knots[i]) ++i;
    return values[i];
}

bool StepFunction::nondecreasing() const {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1]) return false;
    return true;
}

bool StepFunction::nonincreasing() const {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1]) return false;
    return true;
}

FkgReport fkg_monotone_check(double p, int n, std::span<const StepFunction> fs, double z,
                             std::size_t samples, RngState state) {
    if (fs.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("fkg_monotone_check: need one function per coordinate");
    if (samples < 1000) throw std::invalid_argument("fkg_monotone_check: need at least 10^3 samples");

    int n_up = 0, n_down = 0;
    for (const auto& f : fs) {
        const bool up = f.nondecreasing();
        const bool down = f.nonincreasing();
        if (!up && !down)
            throw std::invalid_argument("fkg_monotone_check: functions must be monotone");
        if (up && !down) ++n_up;
        if (down && !up) ++n_down;
    }
    int direction = 0;
    if (n_up == 0 || n_down == 0)
        direction = +1;  // aligned family: joint <= product
    else if (n == 2 && n_up == 1 && n_down == 1)
        direction = -1;  // opposed pair: inequality reverses

    Rng rng(state);
    ProductMarginAccumulator acc(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> terms(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < samples; ++i) {
        // cone coordinates are exactly |X_i| / |X|_p up to sign
        sampling::sample_cone(n, p, rng, x);
        double joint = 1.0;
        for (int k = 0; k < n; ++k) {
            const double t = std::abs(x[static_cast<std::size_t>(k)]);
            const double v = fs[static_cast<std::size_t>(k)](t);
            terms[static_cast<std::size_t>(k)] = v;
            joint *= v;
        }
        acc.add(joint, terms);
    }
    const auto r = acc.finish();
    FkgReport report;
    report.joint = r.joint;
    report.product = r.product;
    report.margin_se = r.margin_se;
    report.expected_direction = direction;
    if (direction > 0)
        report.pass = r.margin <= z * r.margin_se;
    else if (direction < 0)
        report.pass = -r.margin <= z * r.margin_se;
    else
        report.pass = true;  // nothing asserted, values reported only
    return report;
}

namespace {
std::string fmt_double(double v) {
    if (!std::isfinite(v)) return v > 0.0 ? "1e308" : "-1e308";  // JSON has no inf
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}
} // namespace

std::string subindependence_report_json(const SubindependenceReport& report) {
    std::ostringstream os;
    os << "{\"measure\":\"" << report.measure.describe() << "\",";
    os << "\"z\":" << fmt_double(report.z) << ",";
    os << "\"grid_size\":" << report.points.size() << ",";
    os << "\"min_margin_sigma\":" << fmt_double(report.min_margin_sigma) << ",";
    os << "\"pass\":" << (report.pass ? "true" : "false") << ",";
    os << "\"points\":[";
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const auto& pt = report.points[i];
        if (i) os << ",";
        os << "{\"thresholds\":[";
        for (std::size_t k = 0; k < pt.slab.thresholds.size(); ++k) {
            if (k) os << ",";
            os << fmt_double(pt.slab.thresholds[k]);
        }
        os << "],\"orientation\":\"" << (pt.slab.orientation == Orientation::outer ? ">=" : "<=")
           << "\",\"joint\":" << fmt_double(pt.est.joint.value)
           << ",\"product\":" << fmt_double(pt.est.product.value)
           << ",\"margin\":" << fmt_double(pt.est.margin)
           << ",\"margin_se\":" << fmt_double(pt.est.margin_se)
           << ",\"pass\":" << (pt.pass ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
}

} // namespace lpball::slabs
