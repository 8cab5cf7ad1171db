#include "lpball/sections.hpp"

#include "lpball/specfun.hpp"
#include "lpball/stats.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lpball;
using namespace lpball::sections;

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
}

TEST_CASE("subspace validation") {
    Eigen::MatrixXd bad(1, 2);
    bad << 1.0, 1.0;  // not normalized
    CHECK_THROWS_AS(Subspace(2, 1, bad), std::invalid_argument);
    CHECK_THROWS_AS(Subspace::diagonal(5, 2), std::invalid_argument);
    CHECK_THROWS_AS(Subspace::axis(2, 3), std::invalid_argument);
}

TEST_CASE("random subspaces are orthonormal and reproducible") {
    Rng a({80, 0}), b({80, 0});
    for (int i = 0; i < 5; ++i) {
        const auto ea = Subspace::random(7, 3, a);
        const auto eb = Subspace::random(7, 3, b);
        CHECK(ea.basis() == eb.basis());
        const Eigen::MatrixXd gram = ea.basis() * ea.basis().transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("one-dimensional random subspace of the plane has uniform angle") {
    Rng rng({81, 0});
    std::vector<double> angles;
    for (int i = 0; i < 40000; ++i) {
        const auto e = Subspace::random(2, 1, rng);
        angles.push_back(std::atan2(e.basis()(0, 1), e.basis()(0, 0)));
    }
    CHECK(stats::chi_square_uniformity(angles, -M_PI, M_PI, 16, 1e-3).pass);
}

TEST_CASE("diagonal subspace bases") {
    const auto d21 = Subspace::diagonal(2, 1);
    CHECK(d21.basis()(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(d21.basis()(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    const auto d42 = Subspace::diagonal(4, 2);
    Eigen::MatrixXd expect(2, 4);
    expect << 1, 0, 1, 0, 0, 1, 0, 1;
    expect /= std::sqrt(2.0);
    CHECK((d42.basis() - expect).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(d42.axis_aligned() == false);
    CHECK(Subspace::axis(5, 2).axis_aligned());
}

TEST_CASE("subspace save/load round trip") {
    Rng rng({82, 0});
    const auto e = Subspace::random(5, 2, rng);
    std::stringstream ss;
    e.save(ss);
    const auto r = Subspace::load(ss);
    CHECK(r.ambient_dim() == 5);
    CHECK(r.dim() == 2);
    CHECK((r.basis() - e.basis()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact gaussian norm moments") {
    CHECK(gauss_norm_moment(3, 0.0) == doctest::Approx(1.0));
    CHECK(gauss_norm_moment(3, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gauss_norm_moment(1, 1.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(gauss_norm_moment(2, -2.0), std::domain_error);
    CHECK(section_pmoment_exact(1, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(section_pmoment_exact(4, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("exact laplace transform of the p-norm on full space") {
    // p = 2 closed form: E exp(-c |G|_2^2) = (1 + 2c)^{-k/2}
    for (int k : {1, 3})
        for (double c : {0.25, 1.0, 4.0})
            CHECK(laplace_pnorm_exact(k, 2.0, c) ==
                  doctest::Approx(std::pow(1.0 + 2.0 * c, -0.5 * k)).epsilon(1e-9));
    CHECK(laplace_pnorm_exact(3, 1.5, 0.0) == 1.0);
}

TEST_CASE("cube gaussian mass closed form") {
    for (double r : {0.5, 1.0, 2.0})
        CHECK(cube_gaussian_exact(1, r) == doctest::Approx(specfun::theta(r) / kSqrt2Pi));
    CHECK(cube_gaussian_exact(3, 1.0) ==
          doctest::Approx(std::pow(specfun::theta(1.0) / kSqrt2Pi, 3.0)).epsilon(1e-12));
}

TEST_CASE("section moment basics") {
    const auto full = Subspace::axis(3, 3);
    CHECK(section_moment(full, 1.5, 0.0, 5000, {83, 0}).value == 1.0);
    CHECK_THROWS_AS(section_moment(full, 1.5, -3.0, 5000, {83, 1}), std::domain_error);

    // full space, beta = p: k E|g|^p (the p = 2 case is E |G|_2^2 = k)
    for (double p : {1.0, 2.0, 3.0}) {
        const auto e = section_moment(full, p, p, 100000, {83, static_cast<std::uint64_t>(p * 10)});
        const double exact = section_pmoment_exact(3, p);
        CHECK(std::abs(e.value - exact) <= 3.0 * e.std_error + 1e-12);
    }
}

TEST_CASE("diagonal line of the plane: closed-form section moments") {
    const auto d = Subspace::diagonal(2, 1);
    for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        // |t (1,1)/sqrt(2)|_p = |t| 2^{1/p - 1/2}: the directional factor is constant
        const auto e = section_moment(d, p, p, 2000, {84, static_cast<std::uint64_t>(p * 10)});
        const double exact = std::pow(2.0, 1.0 - 0.5 * p) * specfun::gauss_abs_moment(p);
        CHECK(e.value == doctest::Approx(exact).epsilon(1e-12));
        CHECK(e.std_error <= 1e-12);
        // negative moment on the same line
        const auto en = section_moment(d, p, -0.5, 2000, {84, static_cast<std::uint64_t>(p * 10) + 1});
        const double exactn =
            gauss_norm_moment(1, -0.5) * std::pow(std::pow(2.0, 1.0 / p - 0.5), -0.5);
        CHECK(en.value == doctest::Approx(exactn).epsilon(1e-12));
    }
}

TEST_CASE("moment ratio is one on coordinate subspaces and the full space") {
    for (double p : {1.0, 2.0, 4.0}) {
        const auto e = section_pmoment_ratio(Subspace::axis(5, 2), p, 50000,
                                             {85, static_cast<std::uint64_t>(p)});
        CHECK(std::abs(e.value - 1.0) <= 3.0 * e.std_error + 1e-12);
    }
    const auto e = section_pmoment_ratio(Subspace::axis(3, 3), 1.5, 50000, {85, 9});
    CHECK(std::abs(e.value - 1.0) <= 3.0 * e.std_error + 1e-12);
}

TEST_CASE("moment ratio scan is nonincreasing in p") {
    Rng rng({86, 0});
    const std::vector<double> ps{0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
    for (int trial = 0; trial < 3; ++trial) {
        const auto e = Subspace::random(4 + trial, 2, rng);
        const auto ests = section_pmoment_ratio_scan(e, ps, 50000, {87, static_cast<std::uint64_t>(trial)});
        std::vector<ScanPoint> pts;
        for (std::size_t i = 0; i < ps.size(); ++i) pts.push_back({ps[i], ests[i]});
        CHECK(scan_monotone_within_ci(pts, -1, 3.0));
    }
    // closed form on the diagonal line: ratio = 2^{1 - p/2}, strictly decreasing
    const auto d = Subspace::diagonal(2, 1);
    for (double p : ps) {
        const auto e = section_pmoment_ratio(d, p, 2000, {88, static_cast<std::uint64_t>(p * 10)});
        CHECK(e.value == doctest::Approx(std::pow(2.0, 1.0 - 0.5 * p)).epsilon(1e-12));
    }
}

TEST_CASE("laplace functional") {
    const auto full = Subspace::axis(3, 3);
    CHECK(laplace_functional(full, 2.0, 0.0, 1.0, 5000, {89, 0}).value == 1.0);
    for (double l : {0.5, 2.0}) {
        const auto e = laplace_functional(full, 2.0, l, 1.0, 100000,
                                          {89, static_cast<std::uint64_t>(l * 10)});
        CHECK(std::abs(e.value - std::pow(1.0 + 2.0 * l, -1.5)) <= 3.5 * e.std_error);
    }
    // dominated convergence: larger lambda gives smaller values
    const auto e1 = laplace_functional(full, 1.5, 1.0, 0.5, 50000, {89, 100});
    const auto e2 = laplace_functional(full, 1.5, 10.0, 0.5, 50000, {89, 101});
    const auto e3 = laplace_functional(full, 1.5, 100.0, 0.5, 50000, {89, 102});
    CHECK(e1.value > e2.value);
    CHECK(e2.value > e3.value);
}

TEST_CASE("normalized laplace ratio: unity at p = 2 and on coordinate subspaces") {
    Rng rng({90, 0});
    const auto e_rand = Subspace::random(4, 2, rng);
    const auto f2 = normalized_laplace_ratio(e_rand, 2.0, 1.0, 100000, {90, 1});
    CHECK(std::abs(f2.value - 1.0) <= 3.0 * f2.std_error);
    for (double p : {0.7, 1.5, 3.0}) {
        const auto fa = normalized_laplace_ratio(Subspace::axis(4, 2), p, 1.0, 100000,
                                                 {90, static_cast<std::uint64_t>(p * 10)});
        CHECK(std::abs(fa.value - 1.0) <= 3.0 * fa.std_error);
    }
}

TEST_CASE("normalized laplace ratio is nondecreasing up to p = 2 and above one beyond") {
    Rng rng({91, 0});
    const auto E = Subspace::random(4, 2, rng);
    std::vector<ScanPoint> low;
    for (double p : {0.5, 1.0, 1.5, 2.0}) {
        const auto f = normalized_laplace_ratio(E, p, 1.0, 100000,
                                                {91, static_cast<std::uint64_t>(p * 10)});
        low.push_back({p, f});
    }
    CHECK(scan_monotone_within_ci(low, +1, 3.0));
    for (double p : {3.0, 4.0}) {
        const auto f = normalized_laplace_ratio(E, p, 1.0, 100000,
                                                {91, static_cast<std::uint64_t>(p * 10)});
        CHECK(f.value >= 1.0 - 3.0 * f.std_error);
    }
}

TEST_CASE("laplace ratio scan: exact at zero, monotone, quadrature oracle") {
    const std::vector<double> lambdas{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    const auto d = Subspace::diagonal(2, 1);
    const auto pts = laplace_ratio_scan(d, 1.0, lambdas, 100000, {92, 0});
    CHECK(pts.front().est.value == 1.0);
    CHECK(pts.front().est.std_error == 0.0);
    // oracle: on the diagonal line |G|_1 = sqrt(2)|t|; both sides are 1-d integrals
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        const double l = lambdas[i];
        auto phi = [](double t) { return std::exp(-0.5 * t * t) / kSqrt2Pi * 2.0; };
        const double num = testutil::simpson(
            [&](double t) { return std::exp(-l * std::sqrt(2.0) * t) * phi(t); }, 0.0, 12.0,
            200000);
        const double den = testutil::simpson(
            [&](double t) { return std::exp(-l * t) * phi(t); }, 0.0, 12.0, 200000);
        CHECK(std::abs(pts[i].est.value - num / den) <= 3.5 * pts[i].est.std_error + 1e-9);
    }
    CHECK(scan_monotone_within_ci(pts, -1, 3.0));

    Rng rng({93, 0});
    const auto E = Subspace::random(4, 2, rng);
    const auto up = laplace_ratio_scan(E, 3.0, lambdas, 100000, {93, 1});
    CHECK(up.front().est.value == 1.0);
    CHECK(scan_monotone_within_ci(up, +1, 3.0));
}

TEST_CASE("cube section gaussian mass") {
    // one dimension: theta(r) normalization
    const auto line = Subspace::axis(1, 1);
    for (double r : {0.5, 1.5}) {
        const auto e = cube_section_gaussian(line, r, 100000,
                                             {94, static_cast<std::uint64_t>(r * 10)});
        CHECK(std::abs(e.value - specfun::theta(r) / kSqrt2Pi) <= 3.5 * e.std_error);
    }
    // diagonal of the plane: the section is a longer interval
    const auto diag = Subspace::diagonal(2, 1);
    for (double r : {0.5, 1.0}) {
        const auto e = cube_section_gaussian(diag, r, 100000,
                                             {95, static_cast<std::uint64_t>(r * 10)});
        const double exact = specfun::theta(r * std::sqrt(2.0)) / kSqrt2Pi;
        CHECK(std::abs(e.value - exact) <= 3.5 * e.std_error);
        CHECK(e.value >= specfun::theta(r) / kSqrt2Pi - 3.0 * e.std_error);
    }
    // coordinate subspaces factorize exactly
    const auto ax = Subspace::axis(5, 3);
    const auto e = cube_section_gaussian(ax, 1.0, 100000, {96, 0});
    CHECK(std::abs(e.value - cube_gaussian_exact(3, 1.0)) <= 3.5 * e.std_error);
}

TEST_CASE("cube ratio scan and the two-sided bounds") {
    const std::vector<double> rs{0.5, 1.0, 1.5, 2.0, 3.0};
    const auto ax = Subspace::axis(5, 3);
    for (const auto& pt : cube_ratio_scan(ax, rs, 50000, {97, 0}))
        CHECK(std::abs(pt.est.value - 1.0) <= 3.5 * pt.est.std_error);

    Rng rng({98, 0});
    const auto E = Subspace::random(6, 2, rng);
    const auto pts = cube_ratio_scan(E, rs, 100000, {98, 1});
    CHECK(scan_monotone_within_ci(pts, -1, 3.0));
    for (const auto& pt : pts) CHECK(pt.est.value >= 1.0 - 3.0 * pt.est.std_error);
    for (double r : rs) {
        CHECK(cube_lower_bound_check(E, r, 3.0, 50000, {98, static_cast<std::uint64_t>(r * 10)}).pass);
        CHECK(cube_upper_bound_check(E, r, 3.0, 50000, {98, static_cast<std::uint64_t>(r * 10) + 100}).pass);
    }
    // k = n: the upper bound is attained trivially
    CHECK(cube_upper_bound_check(Subspace::axis(3, 3), 1.0, 3.0, 20000, {98, 200}).pass);
    // diagonal subspaces attain the upper bound exactly
    const auto diag = Subspace::diagonal(6, 2);
    const auto check = cube_upper_bound_check(diag, 0.8, 3.0, 100000, {98, 300});
    CHECK(check.pass);
    CHECK(std::abs(check.estimate - check.bound) <= 3.5 * check.estimate_se);
}

TEST_CASE("laplace upper bound from the convolution inequality") {
    Rng rng({99, 0});
    const auto E = Subspace::random(6, 3, rng);
    // p = 2: equality by rotation invariance
    const auto eq = laplace_upper_bound_check(E, 2.0, 1.0, 3.0, 100000, {99, 1});
    CHECK(eq.pass);
    CHECK(std::abs(eq.estimate - eq.bound) <= 3.5 * eq.estimate_se);
    // lambda = 0: both sides are exactly one
    const auto zero = laplace_upper_bound_check(E, 3.0, 0.0, 3.0, 5000, {99, 2});
    CHECK(zero.pass);
    CHECK(zero.estimate == 1.0);
    CHECK(zero.bound == 1.0);
    // strict cases
    for (double p : {3.0, 4.0})
        for (double l : {0.5, 2.0})
            CHECK(laplace_upper_bound_check(E, p, l, 3.0, 100000,
                                            {99, static_cast<std::uint64_t>(p * 100 + l * 10)})
                      .pass);
    // the diagonal subspace attains equality
    const auto diag = Subspace::diagonal(6, 3);
    const auto deq = laplace_upper_bound_check(diag, 3.0, 1.0, 3.0, 100000, {99, 500});
    CHECK(deq.pass);
    CHECK(std::abs(deq.estimate - deq.bound) <= 3.5 * deq.estimate_se);
    CHECK_THROWS_AS(laplace_upper_bound_check(E, 1.5, 1.0, 3.0, 5000, {99, 600}),
                    std::invalid_argument);
}

TEST_CASE("moment bounds from the convolution inequality") {
    Rng rng({100, 0});
    const auto E = Subspace::random(6, 3, rng);
    const auto rep = bl_moment_bounds_check(E, 4.0, 2.0, 1.25, 3.0, 100000, {100, 1});
    CHECK(rep.pass);
    // beta = 0 reduces both sides to one
    const auto rep0 = bl_moment_bounds_check(E, 3.0, 0.0, 0.0, 3.0, 5000, {100, 2});
    CHECK(rep0.pass);
    CHECK(rep0.positive.estimate == 1.0);
    CHECK(rep0.positive.bound == doctest::Approx(1.0));
    // diagonal subspace, beta = p: exact equality
    const auto diag = Subspace::diagonal(4, 2);
    const auto repd = bl_moment_bounds_check(diag, 3.0, 3.0, 0.5, 3.0, 100000, {100, 3});
    CHECK(repd.pass);
    CHECK(std::abs(repd.positive.estimate - repd.positive.bound) <=
          3.5 * std::hypot(repd.positive.estimate_se, repd.positive.bound_se) + 1e-12);
}

TEST_CASE("moment order between section and full space flips at p = 2") {
    const auto diag = Subspace::diagonal(2, 1);
    // p = 1: the section side exceeds by 2^{1/p - 1/2} = sqrt(2) on the line
    const auto rep1 = section_moment_order_check(diag, 1.0, 0.5, 1.0, 3.0, 50000, {101, 0});
    CHECK(rep1.expected_direction == +1);
    CHECK(rep1.pass);
    CHECK(rep1.positive.estimate / rep1.positive.bound ==
          doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
    // p = 4 reverses the direction on the same subspace
    const auto rep4 = section_moment_order_check(diag, 4.0, 0.5, 2.0, 3.0, 50000, {101, 1});
    CHECK(rep4.expected_direction == -1);
    CHECK(rep4.pass);
    // p = 2: equalities
    Rng rng({101, 2});
    const auto E = Subspace::random(5, 2, rng);
    const auto rep2 = section_moment_order_check(E, 2.0, 1.0, 1.5, 3.0, 50000, {101, 3});
    CHECK(rep2.expected_direction == 0);
    CHECK(rep2.pass);
}

TEST_CASE("volume ratio of sections") {
    // k = n is exactly one
    const auto full = volume_ratio(Subspace::axis(3, 3), 1.5, 5000, {102, 0});
    CHECK(full.est.value == 1.0);
    CHECK(full.est.std_error == 0.0);
    // coordinate section
    const auto ax = volume_ratio(Subspace::axis(4, 2), 1.5, 20000, {102, 1});
    CHECK(std::abs(ax.est.value - 1.0) <= 3.0 * ax.est.std_error + 1e-6);
    // diagonal chord of the cross-polytope: length sqrt(2) vs diameter 2
    const auto diag = volume_ratio(Subspace::diagonal(2, 1), 1.0, 20000, {102, 2});
    CHECK(std::abs(diag.est.value - 1.0 / std::sqrt(2.0)) <= 3.0 * diag.est.std_error + 1e-4);
    // p = 2 sections of the euclidean ball are balls
    Rng rng({102, 3});
    const auto E = Subspace::random(4, 2, rng);
    const auto e2 = volume_ratio(E, 2.0, 20000, {102, 4});
    CHECK(std::abs(e2.est.value - 1.0) <= 3.0 * e2.est.std_error + 1e-6);
    // direction of the volume comparison on either side of p = 2
    const auto lo = volume_ratio(E, 1.5, 20000, {102, 5});
    CHECK(lo.est.value <= 1.0 + 3.0 * lo.est.std_error + 1e-6);
    const auto hi = volume_ratio(E, 3.0, 20000, {102, 6});
    CHECK(hi.est.value >= 1.0 - 3.0 * hi.est.std_error - 1e-6);
}

TEST_CASE("tilted density normalization and peaked ordering cases") {
    for (double p : {0.7, 1.5, 3.0})
        for (double l : {0.3, 1.0, 4.0})
            CHECK(TiltedDensity(p, l).total_mass() == doctest::Approx(1.0).epsilon(1e-8));

    std::vector<double> agrid;
    for (int i = 1; i <= 50; ++i) agrid.push_back(0.06 * i);

    // identical parameters: equality of all interval masses
    const auto eq = peaked_compare(TiltedDensity(1.5, 1.0), TiltedDensity(1.5, 1.0), agrid);
    CHECK(eq.predicted == PeakedOrder::equal);
    CHECK(eq.pass);

    // p < 2 <= q: unconditional ordering
    const auto c = peaked_compare(TiltedDensity(1.0, 1.0), TiltedDensity(2.0, 1.0), agrid);
    CHECK(c.predicted == PeakedOrder::first_below);
    CHECK(c.asserted);
    CHECK(c.pass);

    // same p < 2: larger lambda is less peaked
    const auto d = peaked_compare(TiltedDensity(1.5, 2.0), TiltedDensity(1.5, 0.5), agrid);
    CHECK(d.predicted == PeakedOrder::first_below);
    CHECK(d.pass);

    // same p > 2: smaller lambda is less peaked
    const auto e = peaked_compare(TiltedDensity(3.0, 0.5), TiltedDensity(3.0, 2.0), agrid);
    CHECK(e.predicted == PeakedOrder::first_below);
    CHECK(e.pass);

    // alpha-conditioned cases with the premise checked explicitly
    const TiltedDensity a1(2.5, 0.1), a2(3.0, 5.0);
    REQUIRE(a1.alpha > a2.alpha);
    const auto a = peaked_compare(a1, a2, agrid);
    CHECK(a.predicted == PeakedOrder::first_below);
    CHECK(a.pass);

    const TiltedDensity b1(0.5, 5.0), b2(1.5, 0.1);
    REQUIRE(b1.alpha < b2.alpha);
    const auto b = peaked_compare(b1, b2, agrid);
    CHECK(b.predicted == PeakedOrder::first_below);
    CHECK(b.pass);

    // arguments swapped: the prediction flips sides
    const auto swapped = peaked_compare(TiltedDensity(2.0, 1.0), TiltedDensity(1.0, 1.0), agrid);
    CHECK(swapped.predicted == PeakedOrder::second_below);
    CHECK(swapped.pass);

    // no covered case: both p > 2 with the alpha premise failing
    const TiltedDensity n1(2.5, 5.0), n2(3.0, 0.1);
    REQUIRE(n1.alpha < n2.alpha);
    const auto none = peaked_compare(n1, n2, agrid);
    CHECK(none.predicted == PeakedOrder::none);
    CHECK_FALSE(none.asserted);
}

TEST_CASE("p = 2 tilted densities coincide for every lambda") {
    // e^{-lambda alpha^2 t^2 - alpha^2 t^2} with alpha = sqrt(pi/(1+lambda))
    std::vector<double> agrid{0.2, 0.5, 1.0, 2.0};
    const auto eq = peaked_compare(TiltedDensity(2.0, 0.3), TiltedDensity(2.0, 3.0), agrid);
    CHECK(eq.predicted == PeakedOrder::equal);
    CHECK(eq.pass);
}

TEST_CASE("truncated gaussian factor of the cube") {
    const CubeDensity d(1.3);
    CHECK(d.theta_r == doctest::Approx(specfun::theta(1.3)));
    CHECK(d.interval_mass(d.r / d.theta_r) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.interval_mass(1e9) == doctest::Approx(1.0).epsilon(1e-12));
    // larger r is less peaked
    for (auto [r, s] : std::vector<std::pair<double, double>>{{2.0, 1.0}, {1.0, 0.5}, {3.0, 2.9}}) {
        const CubeDensity dr(r), ds(s);
        for (int i = 1; i <= 50; ++i) {
            const double a = 0.05 * i;
            CHECK(dr.interval_mass(a) <= ds.interval_mass(a) + 1e-8);
        }
    }
}

TEST_CASE("normalized alpha comparison") {
    const auto c1 = normalized_alpha_comparison(1.0, 2.0, 1.0);
    CHECK(c1.strict);
    // both sides approach sqrt(pi) as lambda -> 0
    const auto c0 = normalized_alpha_comparison(1.0, 2.0, 1e-7);
    CHECK(c0.lhs == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-5));
    CHECK(c0.rhs == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-5));
    CHECK(c0.rhs - c0.lhs < 1e-5);
    // independent-quadrature confirmation at (2, 4, 5)
    const auto c2 = normalized_alpha_comparison(2.0, 4.0, 5.0);
    auto oracle = [](double p, double l) {
        return 2.0 * testutil::simpson(
                         [p, l](double t) { return std::exp(-l * std::pow(t, p) - t * t); }, 0.0,
                         8.0, 400000);
    };
    CHECK(c2.lhs == doctest::Approx(oracle(2.0, 5.0 / std::exp(specfun::log_gamma(1.5)))).epsilon(1e-8));
    CHECK(c2.rhs == doctest::Approx(oracle(4.0, 5.0 / std::exp(specfun::log_gamma(2.5)))).epsilon(1e-8));
    CHECK(c2.strict);
}

TEST_CASE("power convex ordering of normalized variables") {
    const auto fam = default_convex_family();
    // |standard normal|
    auto sampler = [](Rng& rng) { return std::abs(rng.normal()); };
    const auto rep = power_convex_order_check(sampler, 1.0, 2.0, fam, 3.0, 200000, {103, 0});
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
        if (row.name == "linear") CHECK(row.lhs == doctest::Approx(row.rhs).epsilon(1e-9));
        if (row.name == "square") CHECK(row.rhs - row.lhs > 3.0 * row.margin_se);
    }
    // degenerate variable: equality throughout
    auto constant = [](Rng&) { return 2.5; };
    const auto repc = power_convex_order_check(constant, 1.0, 3.0, fam, 3.0, 5000, {103, 1});
    CHECK(repc.pass);
    for (const auto& row : repc.rows) CHECK(row.lhs == doctest::Approx(row.rhs));
}

TEST_CASE("profile behind the section bound is log-concave in the right variable") {
    for (double p : {3.0, 4.0})
        for (double lambda : {0.5, 1.0}) {
            // log psi nondecreasing and midpoint-concave on an s grid
            std::vector<double> s, logpsi;
            for (int i = 0; i <= 20; ++i) {
                s.push_back(0.3 + 0.15 * i);
                logpsi.push_back(std::log(bl_profile(s.back(), p, lambda)));
            }
            for (std::size_t i = 1; i < s.size(); ++i) CHECK(logpsi[i] >= logpsi[i - 1] - 1e-12);
            for (std::size_t i = 0; i + 2 < s.size(); ++i)
                CHECK(logpsi[i + 1] >= 0.5 * (logpsi[i] + logpsi[i + 2]) - 1e-9);
            // t -> t log psi(1/sqrt(t)) midpoint-concave on a geometric t grid
            std::vector<double> t, f;
            for (int i = 0; i <= 20; ++i) {
                t.push_back(0.2 * std::pow(1.25, i));
                f.push_back(t.back() * std::log(bl_profile(1.0 / std::sqrt(t.back()), p, lambda)));
            }
            for (std::size_t i = 0; i + 2 < t.size(); ++i) {
                // unequal spacing: compare against the chord at the middle point
                const double w = (t[i + 1] - t[i]) / (t[i + 2] - t[i]);
                CHECK(f[i + 1] >= (1.0 - w) * f[i] + w * f[i + 2] - 1e-9);
            }
        }
}
