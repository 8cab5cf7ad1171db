#include "lpball/stats.hpp"

#include "lpball/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lpball::stats {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x < 1.18) {
        // theta-function form, rapidly convergent for small x
        const double v = M_PI * M_PI / (8.0 * x * x);
        double s = 0.0;
        for (int j = 1; j <= 20; j += 2) s += std::exp(-v * j * j);
        return std::sqrt(2.0 * M_PI) / x * s;
    }
    double s = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        s += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return 1.0 - 2.0 * s;
}

double ks_cdf_exact(std::size_t n, double d) {
    // Marsaglia, Tsang, Wang (2003): P(D_n < d) = n! / n^n * (H^n)_{k,k}
    // where H is the (2k-1)x(2k-1) matrix below, k = ceil(n d), h = k - n d.
    if (d <= 0.0) return 0.0;
    if (d >= 1.0) return 1.0;
    const double nd = static_cast<double>(n) * d;
    const int k = static_cast<int>(std::ceil(nd));
    const double h = k - nd;
    const int m = 2 * k - 1;

    std::vector<double> H(static_cast<std::size_t>(m) * m, 0.0);
    auto at = [&](std::vector<double>& M, int i, int j) -> double& {
        return M[static_cast<std::size_t>(i) * m + j];
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 >= 0) at(H, i, j) = 1.0;
    for (int i = 0; i < m; ++i) {
        at(H, i, 0) -= std::pow(h, i + 1);
        at(H, m - 1, i) -= std::pow(h, m - i);
    }
    at(H, m - 1, 0) += (2.0 * h - 1.0 > 0.0) ? std::pow(2.0 * h - 1.0, m) : 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i - j + 1 > 0)
                for (int g = 1; g <= i - j + 1; ++g) at(H, i, j) /= g;

    // H^n with power-of-two exponent decomposition; eQ tracks the 10^x scale.
    auto matmul = [&](const std::vector<double>& A, const std::vector<double>& B) {
        std::vector<double> C(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int g = 0; g < m; ++g) {
                const double a = A[static_cast<std::size_t>(i) * m + g];
                if (a == 0.0) continue;
                const double* brow = &B[static_cast<std::size_t>(g) * m];
                double* crow = &C[static_cast<std::size_t>(i) * m];
                for (int j = 0; j < m; ++j) crow[j] += a * brow[j];
            }
        return C;
    };
    auto rescale = [&](std::vector<double>& M, long& e) {
        if (M[static_cast<std::size_t>(k - 1) * m + (k - 1)] > 1e140) {
            for (double& v : M) v *= 1e-140;
            e += 140;
        }
    };

    std::vector<double> P;
    long eP = 0, eH = 0;
    bool haveP = false;
    std::vector<double> base = H;
    std::size_t e = n;
    while (e > 0) {
        if (e & 1) {
            if (!haveP) {
                P = base;
                eP = eH;
                haveP = true;
            } else {
                P = matmul(P, base);
                eP += eH;
                rescale(P, eP);
            }
        }
        e >>= 1;
        if (e > 0) {
            base = matmul(base, base);
            eH *= 2;
            rescale(base, eH);
        }
    }

    double s = P[static_cast<std::size_t>(k - 1) * m + (k - 1)];
    // multiply by n!/n^n
    for (std::size_t i = 1; i <= n; ++i) {
        s *= static_cast<double>(i) / static_cast<double>(n);
        if (s < 1e-140) {
            s *= 1e140;
            eP -= 140;
        }
    }
    return s * std::pow(10.0, static_cast<double>(eP));
}

namespace {

double ks_critical_asymptotic(std::size_t n, double alpha) {
    // invert K(x) = 1 - alpha by bisection, then scale by sqrt(n)
    double lo = 0.2, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_cdf(mid) < 1.0 - alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

std::map<std::pair<std::size_t, double>, double> g_ks_cache;
std::mutex g_ks_cache_mutex;

} // namespace

double ks_critical(std::size_t n, double alpha) {
    if (n == 0) throw std::invalid_argument("ks_critical: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical: alpha in (0,1)");
    {
        std::lock_guard<std::mutex> lock(g_ks_cache_mutex);
        auto it = g_ks_cache.find({n, alpha});
        if (it != g_ks_cache.end()) return it->second;
    }
    double c;
    if (n > 10000) {
        c = ks_critical_asymptotic(n, alpha);
    } else {
        // secant iteration on the exact CDF, seeded by the asymptotic value
        double x = ks_critical_asymptotic(n, alpha);
        double f = ks_cdf_exact(n, x) - (1.0 - alpha);
        double x1 = x * 1.05;
        double f1 = ks_cdf_exact(n, x1) - (1.0 - alpha);
        for (int i = 0; i < 60 && std::abs(f1) > 1e-12; ++i) {
            if (f1 == f) break;
            const double x2 = x1 - f1 * (x1 - x) / (f1 - f);
            x = x1;
            f = f1;
            x1 = std::clamp(x2, 1e-8, 1.0);
            f1 = ks_cdf_exact(n, x1) - (1.0 - alpha);
        }
        c = x1;
    }
    std::lock_guard<std::mutex> lock(g_ks_cache_mutex);
    g_ks_cache[{n, alpha}] = c;
    return c;
}

double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("ks_two_sample_critical: empty sample");
    double lo = 0.2, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_cdf(mid) < 1.0 - alpha)
            lo = mid;
        else
            hi = mid;
    }
    const double c = 0.5 * (lo + hi);
    return c * std::sqrt((static_cast<double>(n1) + n2) / (static_cast<double>(n1) * n2));
}

KsTest ks_test(std::vector<double> sample, const std::function<double(double)>& cdf, double alpha) {
    KsTest t;
    t.critical = ks_critical(sample.size(), alpha);
    t.statistic = ks_statistic(std::move(sample), cdf);
    t.pass = t.statistic < t.critical;
    return t;
}

KsTest ks_two_sample_test(std::vector<double> a, std::vector<double> b, double alpha) {
    KsTest t;
    t.critical = ks_two_sample_critical(a.size(), b.size(), alpha);
    t.statistic = ks_two_sample_statistic(std::move(a), std::move(b));
    t.pass = t.statistic < t.critical;
    return t;
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("normal_quantile: u in (0,1)");
    // Acklam's rational approximation, then one Halley step on erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (u < plow) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement: F(x) - u with F the standard normal CDF
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double w = e / pdf;
    return x - w / (1.0 + 0.5 * x * w);
}

double chi_square_critical(int dof, double alpha) {
    if (dof < 1) throw std::invalid_argument("chi_square_critical: dof must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("chi_square_critical: alpha in (0,1)");
    // x with Q(dof/2, x/2) = alpha
    return 2.0 * specfun::gamma_quantile(0.5 * dof, 1.0 - alpha);
}

ChiSquareTest chi_square_uniformity(std::span<const double> values, double lo, double hi,
                                    int bins, double alpha) {
    if (bins < 2) throw std::invalid_argument("chi_square_uniformity: bins must be >= 2");
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const double expected = static_cast<double>(values.size()) / bins;
    double stat = 0.0;
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    ChiSquareTest t;
    t.statistic = stat;
    t.critical = chi_square_critical(bins - 1, alpha);
    t.pass = stat < t.critical;
    return t;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("pearson_correlation: size mismatch");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace lpball::stats
