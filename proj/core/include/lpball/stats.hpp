#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lpball::stats {

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

/// Kolmogorov limit distribution K(x) = P(sup |B(t)| <= x).
double kolmogorov_cdf(double x);

/// Exact finite-n CDF P(D_n < d) (Marsaglia-Tsang-Wang matrix method).
double ks_cdf_exact(std::size_t n, double d);

/// Critical value for the one-sample statistic at significance alpha:
/// exact for n <= 10^4, asymptotic (with the sqrt(n) scaling) beyond.
/// Results are cached per (n, alpha).
double ks_critical(std::size_t n, double alpha);

/// Asymptotic critical value for the two-sample statistic.
double ks_two_sample_critical(std::size_t n1, std::size_t n2, double alpha);

struct KsTest {
    double statistic = 0.0;
    double critical = 0.0;
    bool pass = false;
};

KsTest ks_test(std::vector<double> sample, const std::function<double(double)>& cdf, double alpha);
KsTest ks_two_sample_test(std::vector<double> a, std::vector<double> b, double alpha);

/// Standard normal quantile.
double normal_quantile(double u);

/// Upper critical value of the chi-square distribution with dof degrees of
/// freedom at significance alpha.
double chi_square_critical(int dof, double alpha);

struct ChiSquareTest {
    double statistic = 0.0;
    double critical = 0.0;
    bool pass = false;
};

/// Equal-probability-bin uniformity test for values in [lo, hi).
ChiSquareTest chi_square_uniformity(std::span<const double> values, double lo, double hi,
                                    int bins, double alpha);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

} // namespace lpball::stats
