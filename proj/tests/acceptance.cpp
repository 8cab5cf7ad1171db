// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Exit code 0 only when all criteria pass (including their wall-time
// budgets).

#include "lpball/balance.hpp"
#include "lpball/covering.hpp"
#include "lpball/moments.hpp"
#include "lpball/sampling.hpp"
#include "lpball/sections.hpp"
#include "lpball/slabs.hpp"
#include "lpball/specfun.hpp"
#include "lpball/stats.hpp"
#include "lpball/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace lpball;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// 1. radial law of the volume sampler: KS of |V|_p against r^n
Result radial_law() {
    const double level = 1e-3;
    const std::size_t N = 100000;
    double worst = 0.0;
    bool pass = true;
    std::uint64_t stream = 0;
    for (int n : {2, 5, 10})
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            Rng rng({1001, stream++});
            std::vector<double> radii(N);
            std::vector<double> x(static_cast<std::size_t>(n));
            const auto m = sampling::BallMeasure::volume(n, p);
            for (std::size_t i = 0; i < N; ++i) {
                sampling::sample(m, rng, x);
                radii[i] = PExponent::lp_norm(x, p);
            }
            const auto t = stats::ks_test(
                std::move(radii), [n](double r) { return std::pow(r, n); }, level);
            worst = std::max(worst, t.statistic / t.critical);
            pass = pass && t.pass;
        }
    return {pass, "max KS/critical = " + fmt(worst) + " over 12 (n,p) pairs"};
}

// 2. exact marginal moments at 10^6 samples with <= 1% relative error
Result marginal_moments() {
    const std::size_t N = 1000000;
    const std::vector<double> qs{1.0, 2.0, 4.0};
    bool pass = true;
    double worst_z = 0.0, worst_rel = 0.0;
    std::uint64_t stream = 0;
    for (int n : {2, 5, 10})
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            Rng rng({1002, stream++});
            const auto m = sampling::BallMeasure::volume(n, p);
            std::vector<double> x(static_cast<std::size_t>(n));
            std::vector<MeanAccumulator> acc(qs.size());
            for (std::size_t i = 0; i < N; ++i) {
                sampling::sample(m, rng, x);
                const double a = std::abs(x[0]);
                for (std::size_t k = 0; k < qs.size(); ++k) acc[k].add(std::pow(a, qs[k]));
            }
            for (std::size_t k = 0; k < qs.size(); ++k) {
                const double exact = moments::marginal_abs_moment_exact(n, p, qs[k]);
                const Estimate e = acc[k].estimate();
                const double zscore = std::abs(e.value - exact) / e.std_error;
                const double rel = e.std_error / e.value;
                worst_z = std::max(worst_z, zscore);
                worst_rel = std::max(worst_rel, rel);
                pass = pass && zscore <= 3.0 && rel <= 0.01;
            }
        }
    return {pass, "max |z| = " + fmt(worst_z) + ", max rel se = " + fmt(worst_rel)};
}

// 3. projected cone measure equals its gamma mixture form
Result projection_equivalence() {
    const double level = 1e-3;
    const std::size_t N = 50000;
    const int triples[9][3] = {{2, 0, 1}, {2, 2, 2}, {2, 3, 3}, {3, 1, 1}, {3, 2, 2},
                               {3, 0, 3}, {5, 2, 1}, {5, 3, 2}, {5, 1, 3}};
    const double ps[4] = {1.0, 1.5, 2.0, 3.0};
    bool pass = true;
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (const auto& t : triples) {
        const int n = t[0], m = t[2];
        const double p = ps[t[1]];
        const auto ma = sampling::BallMeasure::projected_cone(n, p, m);
        const auto mb = sampling::BallMeasure::gamma_mixed(n, p, static_cast<double>(m) / p);
        Rng ra({1003, stream++}), rb({1003, stream++});
        std::vector<double> rad_a(N), rad_b(N), mar_a(N), mar_b(N);
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < N; ++i) {
            sampling::sample(ma, ra, x);
            rad_a[i] = PExponent::lp_norm(x, p);
            mar_a[i] = x[0];
            sampling::sample(mb, rb, x);
            rad_b[i] = PExponent::lp_norm(x, p);
            mar_b[i] = x[0];
        }
        const auto k1 = stats::ks_two_sample_test(rad_a, rad_b, level);
        const auto k2 = stats::ks_two_sample_test(mar_a, mar_b, level);
        worst = std::max({worst, k1.statistic / k1.critical, k2.statistic / k2.critical});
        pass = pass && k1.pass && k2.pass;
    }
    return {pass, "max KS/critical = " + fmt(worst) + " over 9 triples x {radius, marginal}"};
}

// 4. independence of the direction from the p-norm
Result direction_independence() {
    const std::size_t N = 1000000;
    const int n = 5;
    const double tol = 3.0 / std::sqrt(static_cast<double>(N));
    bool pass = true;
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        Rng rng({1004, stream++});
        std::vector<double> y(static_cast<std::size_t>(n));
        std::vector<double> norms(N), s0(N), s1(N), s2(N);
        for (std::size_t i = 0; i < N; ++i) {
            norms[i] = sampling::sample_cone(n, p, rng, y);
            s0[i] = y[0];
            s1[i] = std::abs(y[0]);
            double mx = 0.0;
            for (double v : y) mx = std::max(mx, std::abs(v));
            s2[i] = mx;
        }
        for (const auto* s : {&s0, &s1, &s2}) {
            const double c = std::abs(stats::pearson_correlation(norms, *s));
            worst = std::max(worst, c / tol);
            pass = pass && c < tol;
        }
    }
    return {pass, "max |corr|/(3/sqrt(N)) = " + fmt(worst) + " over 4 p x 3 statistics"};
}

// 5. sub-independence of coordinate slabs across all four measure kinds
Result slab_subindependence() {
    const std::size_t N = 200000;
    const std::vector<double> quantiles{0.5, 0.75, 0.9};
    std::vector<sampling::BallMeasure> measures;
    for (int n : {2, 5, 10})
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            measures.push_back(sampling::BallMeasure::cone(n, p));
            measures.push_back(sampling::BallMeasure::volume(n, p));
            measures.push_back(sampling::BallMeasure::gamma_mixed(n, p, 3.0));
            measures.push_back(sampling::BallMeasure::projected_cone(n, p, 2));
        }
    std::uint64_t stream = 0;
    std::vector<std::vector<slabs::SlabSpec>> grids;
    std::size_t family = 0;
    for (const auto& m : measures) {
        auto g = slabs::quantile_slab_grid(m, quantiles, slabs::Orientation::inner, 20000,
                                           {1005, stream++});
        auto outer = slabs::quantile_slab_grid(m, quantiles, slabs::Orientation::outer, 20000,
                                               {1005, stream++});
        g.insert(g.end(), outer.begin(), outer.end());
        family += g.size();
        grids.push_back(std::move(g));
    }
    const double z = slabs::bonferroni_z(family, 1e-3);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < measures.size(); ++i) {
        const auto rep =
            slabs::subindependence_verdict(measures[i], grids[i], z, N, {1005, stream++});
        for (const auto& pt : rep.points)
            if (!pt.pass) ++violations;
    }
    return {violations == 0, std::to_string(family) + " grid points, z = " + fmt(z) + ", " +
                                 std::to_string(violations) + " violations"};
}

// 6. section moment ratio: closed form on the plane diagonal, monotone in p
Result section_ratio_p() {
    bool pass = true;
    double worst = 0.0;
    const auto diag = sections::Subspace::diagonal(2, 1);
    for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        const auto e = sections::section_pmoment_ratio(diag, p, 2000,
                                                       {1006, static_cast<std::uint64_t>(p * 10)});
        const double exact = std::pow(2.0, 1.0 - 0.5 * p);
        const double err = std::abs(e.value - exact);
        pass = pass && err <= 3.0 * e.std_error + 1e-12;
        worst = std::max(worst, err);
    }
    const std::vector<double> ps{0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
    Rng sub_rng({1006, 999});
    int mono_fail = 0;
    for (int s = 0; s < 10; ++s) {
        const auto E = sections::Subspace::random(4, 2, sub_rng);
        const auto ests = sections::section_pmoment_ratio_scan(
            E, ps, 200000, {1006, static_cast<std::uint64_t>(100 + s)});
        std::vector<sections::ScanPoint> pts;
        for (std::size_t i = 0; i < ps.size(); ++i) pts.push_back({ps[i], ests[i]});
        if (!sections::scan_monotone_within_ci(pts, -1, 3.0)) ++mono_fail;
    }
    pass = pass && mono_fail == 0;
    return {pass, "diagonal max err = " + fmt(worst) + ", monotonicity violations = " +
                      std::to_string(mono_fail) + "/10 subspaces"};
}

// 7. diagonal-subspace moment identity (k | n)
Result diagonal_identity() {
    bool pass = true;
    double worst = 0.0;  // error in units of the allowed band 3 se + rounding
    const int nk[3][2] = {{4, 2}, {6, 3}, {6, 2}};
    std::uint64_t stream = 0;
    for (const auto& d : nk) {
        const auto E = sections::Subspace::diagonal(d[0], d[1]);
        for (double p : {2.0, 3.0, 4.0}) {
            const auto e = sections::section_pmoment_ratio(E, p, 200000, {1007, stream++});
            const double exact = std::pow(static_cast<double>(d[1]) / d[0], 0.5 * p - 1.0);
            const double band = 3.0 * e.std_error + 1e-12;
            worst = std::max(worst, std::abs(e.value - exact) / band);
            pass = pass && std::abs(e.value - exact) <= band;
        }
    }
    return {pass, "max err/band = " + fmt(worst) + " over 3 subspaces x 3 exponents"};
}

// 8. gaussian cube-section sandwich and the ratio scan
Result cube_sandwich() {
    const int n = 6, k = 3;
    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0, 3.0};
    const std::size_t N = 200000;
    Rng sub_rng({1008, 0});
    bool pass = true;
    int mono_fail = 0;
    double worst = -1e300;
    for (int s = 0; s < 10; ++s) {
        const auto E = sections::Subspace::random(n, k, sub_rng);
        const auto pts =
            sections::cube_ratio_scan(E, rs, N, {1008, static_cast<std::uint64_t>(s + 1)});
        const double scale = std::sqrt(static_cast<double>(n) / k);
        for (const auto& pt : pts) {
            const double lower = sections::cube_gaussian_exact(k, pt.x);
            const double upper = sections::cube_gaussian_exact(k, pt.x * scale);
            const double est = pt.est.value * lower;
            const double se = pt.est.std_error * lower;
            const bool ok = est >= lower - 3.0 * se - 1e-12 && est <= upper + 3.0 * se + 1e-12;
            pass = pass && ok;
            worst = std::max({worst, (lower - est) / std::max(se, 1e-300),
                              (est - upper) / std::max(se, 1e-300)});
        }
        if (!sections::scan_monotone_within_ci(pts, -1, 3.0)) ++mono_fail;
    }
    pass = pass && mono_fail == 0;
    return {pass, "worst bound violation = " + fmt(worst) + " sigma, monotonicity violations = " +
                      std::to_string(mono_fail) + "/10"};
}

// 9. peaked ordering of the tilted densities, by quadrature
Result peaked_orderings() {
    struct Case {
        double p1, l1, p2, l2;
    };
    const Case cases[5] = {{2.5, 0.1, 3.0, 5.0},
                           {0.5, 5.0, 1.5, 0.1},
                           {1.0, 1.0, 2.0, 1.0},
                           {1.5, 2.0, 1.5, 0.5},
                           {3.0, 0.5, 3.0, 2.0}};
    std::vector<double> agrid;
    for (int i = 1; i <= 50; ++i) agrid.push_back(0.06 * i);
    bool pass = true;
    double worst = -1e300;
    for (const auto& c : cases) {
        sections::TiltedDensity d1(c.p1, c.l1), d2(c.p2, c.l2);
        // orient so the first density is predicted below
        if (sections::predict_peaked_order(d1, d2) == sections::PeakedOrder::second_below)
            std::swap(d1, d2);
        const auto rep = sections::peaked_compare(d1, d2, agrid, 1e-8);
        pass = pass && rep.asserted && rep.pass;
        for (const auto& row : rep.rows) worst = std::max(worst, row.mass1 - row.mass2);
    }
    return {pass, "5 cases x 50 grid points, worst mass excess = " + fmt(worst)};
}

// 10. two-sided moment formula: empirical band and its stability
Result moment_formula_band() {
    const std::size_t N = 100000;
    const int dirs = 50;
    std::vector<double> constants;
    std::uint64_t stream = 0;
    for (int n : {4, 16}) {
        Rng dir_rng({1010, stream++});
        std::vector<moments::Direction> directions;
        for (int d = 0; d < dirs; ++d)
            directions.push_back(moments::Direction::random_unit(n, dir_rng));
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            Rng rng({1010, stream++});
            const auto pool = sampling::sample_matrix(sampling::BallMeasure::volume(n, p), N, rng);
            for (const auto& dir : directions) {
                const std::vector<double> qs{1.0, 2.0, 4.0, 8.0};
                std::vector<MeanAccumulator> acc(qs.size());
                for (std::size_t i = 0; i < N; ++i) {
                    const double* x = pool.data() + i * static_cast<std::size_t>(n);
                    double dot = 0.0;
                    for (int j = 0; j < n; ++j)
                        dot += dir.coeffs()[static_cast<std::size_t>(j)] * x[j];
                    const double ad = std::abs(dot);
                    for (std::size_t qi = 0; qi < qs.size(); ++qi)
                        acc[qi].add(ad > 0.0 ? std::pow(ad, qs[qi]) : 0.0);
                }
                for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                    const double mc = std::pow(acc[qi].mean(), 1.0 / qs[qi]);
                    const double formula = moments::full_moment_formula(dir, n, p, qs[qi]);
                    const double ratio = mc / formula;
                    constants.push_back(std::max(ratio, 1.0 / ratio));
                }
            }
        }
    }
    const double c_emp = *std::max_element(constants.begin(), constants.end());
    const double stability = c_emp / median_of(constants);
    const bool pass = stability <= 2.0;
    return {pass, "C_emp = " + fmt(c_emp) + ", max/median = " + fmt(stability) + " over " +
                      std::to_string(constants.size()) + " grid points"};
}

// 11. the main diagonal of the 1-ball is a psi_2 direction uniformly in n
Result psi2_diagonal() {
    const std::size_t N = 1000000;
    std::vector<double> values;
    for (int n : {16, 64}) {
        const auto e = moments::psi_constant_mc(moments::Direction::diagonal(n),
                                                sampling::BallMeasure::volume(n, 1.0), 2.0, N,
                                                {1011, static_cast<std::uint64_t>(n)});
        values.push_back(e.value);
    }
    const double ratio = values[1] / values[0];
    const bool pass = ratio >= 0.5 && ratio <= 2.0;
    return {pass, "psi2(64)/psi2(16) = " + fmt(ratio) + " (values " + fmt(values[0]) + ", " +
                      fmt(values[1]) + ")"};
}

// 12. sign balancing: stable implied constant across random instances
Result balancing() {
    Rng rng({1012, 0});
    std::vector<double> constants;
    bool exhaustive_dominates = true;
    for (int inst = 0; inst < 20; ++inst) {
        const int m = 8 + static_cast<int>(rng.uniform() * 9);  // 8..16
        const int d = 3 + static_cast<int>(rng.uniform() * 6);  // 3..8
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m));
        for (auto& x : pts) {
            x.resize(static_cast<std::size_t>(d));
            double s = 0.0;
            for (double& v : x) {
                v = rng.normal();
                s += v * v;
            }
            for (double& v : x) v /= std::sqrt(s);
        }
        const apps::PointSet set(std::move(pts));
        const auto ex = apps::balance_exhaustive(set, PExponent::infinity());
        const auto gr = apps::balance_greedy(set, PExponent::infinity());
        exhaustive_dominates = exhaustive_dominates && gr.value >= ex.value - 1e-12;
        constants.push_back(apps::komlos_bound_check(set, ex).constant);
    }
    const double stability =
        *std::max_element(constants.begin(), constants.end()) / median_of(constants);
    const bool pass = stability <= 2.0 && exhaustive_dominates;
    return {pass, "C_emp max = " + fmt(*std::max_element(constants.begin(), constants.end())) +
                      ", max/median = " + fmt(stability) + " over 20 instances"};
}

// 13. covering counts: stable implied constant across the grid
Result covering() {
    Rng rng({1013, 0});
    const int sizes[3][2] = {{4, 4}, {6, 5}, {8, 6}};
    std::vector<double> constants;
    std::size_t runs = 0;
    for (const auto& sz : sizes) {
        const int m = sz[0], d = sz[1];
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m));
        for (auto& x : pts) {
            x.resize(static_cast<std::size_t>(d));
            double s = 0.0;
            for (double& v : x) {
                v = rng.normal();
                s += v * v;
            }
            const double scale = std::pow(rng.uniform_pos(), 1.0 / d) / std::sqrt(s);
            for (double& v : x) v *= scale;
        }
        const apps::PointSet set(std::move(pts));
        for (double eps : {0.25, 0.5, 1.0})
            for (double pv : {2.0, 4.0, std::numeric_limits<double>::infinity()}) {
                const auto res = apps::covering_count(set, eps, PExponent(pv));
                ++runs;
                if (res.count > 1)
                    constants.push_back(
                        apps::covering_bound_check(m, eps, PExponent(pv), res.count).constant);
            }
    }
    const double stability = constants.empty()
                                 ? 1e300
                                 : *std::max_element(constants.begin(), constants.end()) /
                                       median_of(constants);
    const bool pass = !constants.empty() && stability <= 3.0;
    return {pass, "max/median = " + fmt(stability) + " over " + std::to_string(constants.size()) +
                      " nontrivial counts (" + std::to_string(runs) + " runs)"};
}

// 14. re-running a suite with the same config is bit-identical
Result determinism() {
    const auto cfg = runner::ExperimentConfig::parse(
        "suite = sampling-oracles\nseed = 11\nsamples = 20000\nn = 2, 3\np = 1, 2\nm = 1\n");
    const auto a = runner::run_suite(cfg);
    const auto b = runner::run_suite(cfg);
    const bool pass = a.results_hash() == b.results_hash() && a.rows_csv() == b.rows_csv();
    return {pass, "hash " + a.results_hash() + (pass ? " reproduced" : " NOT reproduced")};
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Result()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"radial-law", 10.0, radial_law},
        {"marginal-moments", 60.0, marginal_moments},
        {"projection-equivalence", 30.0, projection_equivalence},
        {"direction-independence", 20.0, direction_independence},
        {"slab-subindependence", 300.0, slab_subindependence},
        {"section-ratio-p", 120.0, section_ratio_p},
        {"diagonal-identity", 60.0, diagonal_identity},
        {"cube-sandwich", 120.0, cube_sandwich},
        {"peaked-orderings", 10.0, peaked_orderings},
        {"moment-formula-band", 300.0, moment_formula_band},
        {"psi2-diagonal", 120.0, psi2_diagonal},
        {"balancing", 60.0, balancing},
        {"covering", 300.0, covering},
        {"determinism", 60.0, determinism},
    };

    int failures = 0;
    int id = 0;
    for (const auto& c : criteria) {
        ++id;
        const auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = dt <= c.budget_seconds;
        const bool pass = r.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] %02d %-24s %6.2f s (budget %g s)  %s\n", pass ? "PASS" : "FAIL", id,
                    c.name, dt, c.budget_seconds, r.detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
