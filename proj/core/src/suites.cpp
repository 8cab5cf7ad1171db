#include "lpball/suites.hpp"

#include "lpball/balance.hpp"
#include "lpball/covering.hpp"
#include "lpball/moments.hpp"
#include "lpball/sampling.hpp"
#include "lpball/sections.hpp"
#include "lpball/slabs.hpp"
#include "lpball/specfun.hpp"
#include "lpball/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <optional>
#include <limits>
#include <map>
#include <filesystem>
#include <functional>
#include <stdexcept>

namespace lpball::runner {

namespace {

using sampling::BallMeasure;
using sections::Subspace;

struct SuiteContext {
    const ExperimentConfig& cfg;
    // deque: scan() hands out references that must survive later insertions
    std::deque<ReportScan> scans;
    std::uint64_t stream = 0;

    RngState next_stream() { return {cfg.seed, stream++}; }

    ReportScan& scan(const std::string& name) {
        scans.push_back(ReportScan{name, {}});
        return scans.back();
    }
};

using Params = std::vector<std::pair<std::string, double>>;

ReportRow info_row(Params params, double value, double se = -1.0) {
    ReportRow r;
    r.params = std::move(params);
    r.value = value;
    r.std_error = se;
    return r;
}

ReportRow bound_row(Params params, double value, double se, double bound, double margin,
                    bool pass) {
    ReportRow r;
    r.params = std::move(params);
    r.value = value;
    r.std_error = se;
    r.has_bound = true;
    r.bound = bound;
    r.margin = margin;
    r.pass = pass ? 1 : 0;
    return r;
}

double stability_ratio(std::vector<double> cs) {
    // max / median of the distortion constants
    cs.erase(std::remove_if(cs.begin(), cs.end(), [](double c) { return !(c > 0.0); }), cs.end());
    if (cs.empty()) return std::numeric_limits<double>::infinity();
    std::sort(cs.begin(), cs.end());
    const double median = cs[cs.size() / 2];
    return cs.back() / median;
}

std::vector<int> int_grid(const ExperimentConfig& cfg, const std::string& key,
                          std::vector<int> fallback) {
    if (!cfg.has_grid(key)) return fallback;
    std::vector<int> out;
    for (double v : cfg.grids.at(key)) out.push_back(static_cast<int>(v));
    return out;
}

// ---------------------------------------------------------------------------

void suite_sampling_oracles(SuiteContext& ctx) {
    const auto ns = int_grid(ctx.cfg, "n", {2, 5, 10});
    const auto ps = ctx.cfg.grid_or("p", {1.0, 1.5, 2.0, 3.0});
    const auto ms = int_grid(ctx.cfg, "m", {1, 2, 3});
    const double level = ctx.cfg.scalar_or("ks_level", 1e-3);
    const std::size_t N = ctx.cfg.samples;

    auto& radial = ctx.scan("radial-ks");
    auto& support = ctx.scan("cone-support");
    for (int n : ns)
        for (double p : ps) {
            Rng rng(ctx.next_stream());
            const auto measure = BallMeasure::volume(n, p);
            std::vector<double> radii(N);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < N; ++i) {
                sampling::sample(measure, rng, x);
                radii[i] = PExponent::lp_norm(x, p);
            }
            const auto ks = stats::ks_test(
                std::move(radii), [&](double r) { return sampling::radial_cdf(measure, r); }, level);
            radial.rows.push_back(bound_row({{"n", double(n)}, {"p", p}}, ks.statistic, -1.0,
                                            ks.critical, ks.critical - ks.statistic, ks.pass));

            // boundary support of the cone sampler
            Rng rng2(ctx.next_stream());
            double worst = 0.0;
            const std::size_t nc = std::min<std::size_t>(N, 20000);
            for (std::size_t i = 0; i < nc; ++i) {
                sampling::sample_cone(n, p, rng2, x);
                worst = std::max(worst, std::abs(PExponent::lp_norm(x, p) - 1.0));
            }
            support.rows.push_back(bound_row({{"n", double(n)}, {"p", p}}, worst, -1.0, 1e-12,
                                             1e-12 - worst, worst <= 1e-12));
        }

    // independence of the direction from the p-norm of the Gaussian draw
    auto& indep = ctx.scan("independence");
    const int n_ind = int_grid(ctx.cfg, "independence_n", {5}).front();
    for (double p : ps) {
        Rng rng(ctx.next_stream());
        std::vector<double> norms(N);
        std::vector<double> stat0(N), stat1(N), stat2(N);
        std::vector<double> y(static_cast<std::size_t>(n_ind));
        for (std::size_t i = 0; i < N; ++i) {
            norms[i] = sampling::sample_cone(n_ind, p, rng, y);
            stat0[i] = y[0];
            stat1[i] = std::abs(y[0]);
            double mx = 0.0;
            for (double v : y) mx = std::max(mx, std::abs(v));
            stat2[i] = mx;
        }
        const double tol = 3.0 / std::sqrt(static_cast<double>(N));
        const double c0 = std::abs(stats::pearson_correlation(norms, stat0));
        const double c1 = std::abs(stats::pearson_correlation(norms, stat1));
        const double c2 = std::abs(stats::pearson_correlation(norms, stat2));
        int which = 0;
        for (double c : {c0, c1, c2})
            indep.rows.push_back(bound_row({{"p", p}, {"stat", double(which++)}}, c, -1.0, tol,
                                           tol - c, c < tol));
    }

    // the projected cone measure agrees with its gamma-mixture form
    auto& proj = ctx.scan("projection-equivalence");
    std::size_t cyc = 0;
    for (int n : ns)
        for (int m : ms) {
            const double p = ps[cyc++ % ps.size()];
            Rng rng_a(ctx.next_stream());
            Rng rng_b(ctx.next_stream());
            const std::size_t nn = std::min<std::size_t>(N, 50000);
            const auto ma = BallMeasure::projected_cone(n, p, m);
            const auto mb = BallMeasure::gamma_mixed(n, p, static_cast<double>(m) / p);
            std::vector<double> ra(nn), rb(nn), fa(nn), fb(nn);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < nn; ++i) {
                sampling::sample(ma, rng_a, x);
                ra[i] = PExponent::lp_norm(x, p);
                fa[i] = x[0];
                sampling::sample(mb, rng_b, x);
                rb[i] = PExponent::lp_norm(x, p);
                fb[i] = x[0];
            }
            const auto ks_r = stats::ks_two_sample_test(ra, rb, level);
            const auto ks_f = stats::ks_two_sample_test(fa, fb, level);
            const double stat = std::max(ks_r.statistic, ks_f.statistic);
            proj.rows.push_back(bound_row({{"n", double(n)}, {"p", p}, {"m", double(m)}}, stat,
                                          -1.0, ks_r.critical, ks_r.critical - stat,
                                          ks_r.pass && ks_f.pass));
        }
}

// ---------------------------------------------------------------------------

void suite_moments(SuiteContext& ctx) {
    const auto ns = int_grid(ctx.cfg, "n", {2, 5, 10});
    const auto ps = ctx.cfg.grid_or("p", {1.0, 1.5, 2.0, 3.0});
    const auto qs = ctx.cfg.grid_or("q", {1.0, 2.0, 4.0});
    const double z = ctx.cfg.confidence_z;
    const double max_rel_se = ctx.cfg.scalar_or("max_rel_se", 0.01);
    const std::size_t N = ctx.cfg.samples;

    auto& scan = ctx.scan("marginal-oracle");
    for (int n : ns)
        for (double p : ps) {
            Rng rng(ctx.next_stream());
            const auto measure = BallMeasure::volume(n, p);
            std::vector<MeanAccumulator> acc(qs.size());
            std::vector<double> x(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < N; ++i) {
                sampling::sample(measure, rng, x);
                const double a = std::abs(x[0]);
                for (std::size_t k = 0; k < qs.size(); ++k) acc[k].add(std::pow(a, qs[k]));
            }
            for (std::size_t k = 0; k < qs.size(); ++k) {
                const double exact = moments::marginal_abs_moment_exact(n, p, qs[k]);
                const Estimate e = acc[k].estimate();
                const bool tight = e.std_error <= max_rel_se * e.value;
                const bool within = std::abs(e.value - exact) <= z * e.std_error;
                const double band = z * e.std_error + 1e-15;
                scan.rows.push_back(bound_row({{"q", qs[k]},
                                               {"n", double(n)},
                                               {"p", p},
                                               {"direction", 0.0},
                                               {"ratio", e.value / exact}},
                                              e.value, e.std_error, exact,
                                              (e.value - exact) / band, within && tight));
            }
        }
}

// ---------------------------------------------------------------------------

void suite_khinchine(SuiteContext& ctx) {
    const auto ns = int_grid(ctx.cfg, "n", {4, 16});
    const auto ps = ctx.cfg.grid_or("p", {1.0, 1.5, 2.0, 3.0});
    const auto qs = ctx.cfg.grid_or("q", {1.0, 2.0, 4.0, 8.0});
    const int dirs = static_cast<int>(ctx.cfg.scalar_or("directions", 50));
    const std::size_t N = ctx.cfg.samples;

    auto& band = ctx.scan("gk-band");
    std::vector<double> constants;
    for (int n : ns) {
        // shared direction set per dimension
        Rng dir_rng(ctx.next_stream());
        std::vector<moments::Direction> directions;
        for (int d = 0; d < dirs; ++d) directions.push_back(moments::Direction::random_unit(n, dir_rng));

        for (double p : ps) {
            Rng rng(ctx.next_stream());
            const auto pool = sampling::sample_matrix(BallMeasure::volume(n, p), N, rng);
            for (int d = 0; d < dirs; ++d) {
                const auto& a = directions[static_cast<std::size_t>(d)].coeffs();
                std::vector<MeanAccumulator> acc(qs.size());
                for (std::size_t i = 0; i < N; ++i) {
                    const double* x = pool.data() + i * static_cast<std::size_t>(n);
                    double dot = 0.0;
                    for (int j = 0; j < n; ++j) dot += a[static_cast<std::size_t>(j)] * x[j];
                    const double ad = std::abs(dot);
                    for (std::size_t k = 0; k < qs.size(); ++k)
                        acc[k].add(ad > 0.0 ? std::pow(ad, qs[k]) : 0.0);
                }
                for (std::size_t k = 0; k < qs.size(); ++k) {
                    const Estimate rooted = root_transform(acc[k].estimate(), qs[k]);
                    const double formula = moments::full_moment_formula(
                        directions[static_cast<std::size_t>(d)], n, p, qs[k]);
                    const double ratio = rooted.value / formula;
                    constants.push_back(std::max(ratio, 1.0 / ratio));
                    band.rows.push_back(info_row({{"q", qs[k]},
                                                  {"n", double(n)},
                                                  {"p", p},
                                                  {"direction", double(d)},
                                                  {"ratio", ratio}},
                                                 rooted.value, rooted.std_error));
                }
            }
        }
    }

    auto& summary = ctx.scan("band-summary");
    const double c_emp = *std::max_element(constants.begin(), constants.end());
    const double stab = stability_ratio(constants);
    const double stab_tol = ctx.cfg.scalar_or("stability_tol", 2.0);
    summary.rows.push_back(info_row({{"which", 0.0}}, c_emp));
    summary.rows.push_back(
        bound_row({{"which", 1.0}}, stab, -1.0, stab_tol, stab_tol - stab, stab <= stab_tol));

    // extremizing directions of the Khinchine constants
    auto& extremal = ctx.scan("khinchine-extremal");
    const std::size_t Ne = std::min<std::size_t>(N, 200000);
    for (int n : ns)
        for (double p : ps)
            for (double q : qs) {
                std::vector<moments::Direction> cands;
                cands.push_back(moments::Direction::axis(n));
                cands.push_back(moments::Direction::diagonal(n));
                if (q < n) {
                    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
                    const int head = std::max(1, static_cast<int>(std::floor(q)));
                    for (int i = 0; i < head; ++i)
                        v[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(double(head));
                    cands.emplace_back(std::move(v));
                }
                double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                for (const auto& cand : cands) {
                    const Estimate e = moments::functional_moment_mc(
                        cand, BallMeasure::volume(n, p), q, Ne, ctx.next_stream());
                    lo = std::min(lo, e.value);
                    hi = std::max(hi, e.value);
                }
                const auto k = moments::khinchine_constants(p, q, n);
                extremal.rows.push_back(info_row(
                    {{"q", q}, {"n", double(n)}, {"p", p}, {"A_formula", k.A}, {"B_formula", k.B}, {"A_emp", lo}},
                    hi));
            }
}

// ---------------------------------------------------------------------------

void suite_psi2(SuiteContext& ctx) {
    const auto ns = int_grid(ctx.cfg, "n", {16, 64});
    const auto ps = ctx.cfg.grid_or("p", {1.0});
    const std::size_t N = ctx.cfg.samples;

    auto& diag = ctx.scan("psi2-diagonal");
    std::vector<double> diag_values;
    for (int n : ns)
        for (double p : ps) {
            const auto theta = moments::Direction::diagonal(n);
            const Estimate e =
                moments::psi_constant_mc(theta, BallMeasure::volume(n, p), 2.0, N, ctx.next_stream());
            const double formula = p <= 2.0 ? moments::psi2_direction_constant(theta, n, p) : 1.0;
            diag.rows.push_back(info_row(
                {{"n", double(n)}, {"p", p}, {"formula", formula}, {"ratio", e.value / formula}},
                e.value, e.std_error));
            if (p == ps.front()) diag_values.push_back(e.value);
        }

    auto& summary = ctx.scan("diagonal-summary");
    if (diag_values.size() >= 2) {
        const double ratio = diag_values.back() / diag_values.front();
        const bool ok = ratio >= 0.5 && ratio <= 2.0;
        summary.rows.push_back(bound_row({{"which", 0.0}}, ratio, -1.0, 2.0, 2.0 - ratio, ok));
    }

    // random directions against the predicted psi_2 constant
    auto& rnd = ctx.scan("psi2-random");
    const int dirs = static_cast<int>(ctx.cfg.scalar_or("directions", 5));
    std::vector<double> ratios;
    for (int n : ns)
        for (double p : ps) {
            if (p > 2.0) continue;
            Rng dir_rng(ctx.next_stream());
            for (int d = 0; d < dirs; ++d) {
                const auto theta = moments::Direction::random_unit(n, dir_rng);
                const Estimate e = moments::psi_constant_mc(
                    theta, BallMeasure::volume(n, p), 2.0, std::min<std::size_t>(N, 200000),
                    ctx.next_stream());
                const double formula = moments::psi2_direction_constant(theta, n, p);
                ratios.push_back(e.value / formula);
                rnd.rows.push_back(info_row(
                    {{"n", double(n)}, {"p", p}, {"direction", double(d)}, {"formula", formula}},
                    e.value, e.std_error));
            }
        }
    if (!ratios.empty()) {
        std::vector<double> cs;
        for (double r : ratios) cs.push_back(std::max(r, 1.0 / r));
        const double stab = stability_ratio(cs);
        summary.rows.push_back(
            bound_row({{"which", 1.0}}, stab, -1.0, 2.5, 2.5 - stab, stab <= 2.5));
    }
}

// ---------------------------------------------------------------------------

void suite_slabs(SuiteContext& ctx) {
    const auto ns = int_grid(ctx.cfg, "n", {2, 5, 10});
    const auto ps = ctx.cfg.grid_or("p", {1.0, 1.5, 2.0, 3.0});
    const double alpha = ctx.cfg.scalar_or("alpha", 3.0);
    const int m = static_cast<int>(ctx.cfg.scalar_or("m", 2));
    const std::vector<double> quantiles = ctx.cfg.grid_or("quantiles", {0.5, 0.75, 0.9});
    const std::size_t N = ctx.cfg.samples;

    std::vector<BallMeasure> measures;
    for (int n : ns)
        for (double p : ps) {
            measures.push_back(BallMeasure::cone(n, p));
            measures.push_back(BallMeasure::volume(n, p));
            measures.push_back(BallMeasure::gamma_mixed(n, p, alpha));
            measures.push_back(BallMeasure::projected_cone(n, p, m));
        }

    // family-wise correction across the whole grid
    std::size_t family = 0;
    std::vector<std::vector<slabs::SlabSpec>> specs;
    for (const auto& measure : measures) {
        auto inner = slabs::quantile_slab_grid(measure, quantiles, slabs::Orientation::inner,
                                               std::min<std::size_t>(N, 20000), ctx.next_stream());
        auto outer = slabs::quantile_slab_grid(measure, quantiles, slabs::Orientation::outer,
                                               std::min<std::size_t>(N, 20000), ctx.next_stream());
        inner.insert(inner.end(), outer.begin(), outer.end());
        family += inner.size();
        specs.push_back(std::move(inner));
    }
    const double z = std::max(ctx.cfg.confidence_z,
                              slabs::bonferroni_z(family, ctx.cfg.scalar_or("family_level", 1e-3)));

    auto& scan = ctx.scan("subindependence");
    double min_sigma = std::numeric_limits<double>::infinity();
    for (std::size_t mi = 0; mi < measures.size(); ++mi) {
        const auto report =
            slabs::subindependence_verdict(measures[mi], specs[mi], z, N, ctx.next_stream());
        for (std::size_t pi = 0; pi < report.points.size(); ++pi) {
            const auto& pt = report.points[pi];
            scan.rows.push_back(bound_row(
                {{"measure", double(mi)},
                 {"point", double(pi)},
                 {"n", double(measures[mi].n)},
                 {"p", measures[mi].p},
                 {"kind", double(static_cast<int>(measures[mi].kind))},
                 {"orientation", pt.slab.orientation == slabs::Orientation::outer ? 1.0 : 0.0}},
                pt.est.joint.value, pt.est.margin_se, pt.est.product.value,
                -pt.est.margin / (z * pt.est.margin_se + 1e-15), pt.pass));
        }
        min_sigma = std::min(min_sigma, report.min_margin_sigma);
    }
    auto& summary = ctx.scan("slabs-summary");
    if (!std::isfinite(min_sigma)) min_sigma = 1e308;  // keep the report JSON-clean
    summary.rows.push_back(info_row({{"grid_points", double(family)}, {"z", z}}, min_sigma));
}

// ---------------------------------------------------------------------------

void suite_sections_p_scan(SuiteContext& ctx) {
    const double z = ctx.cfg.confidence_z;
    const std::size_t N = ctx.cfg.samples;

    // closed-form diagonal section in the plane
    auto& diag2 = ctx.scan("diagonal-exact");
    {
        const Subspace E = Subspace::diagonal(2, 1);
        for (double p : ctx.cfg.grid_or("p_exact", {0.5, 1.0, 2.0, 3.0, 4.0})) {
            const Estimate e = sections::section_pmoment_ratio(E, p, N, ctx.next_stream());
            const double exact = std::pow(2.0, 1.0 - 0.5 * p);
            const double band = z * e.std_error + 1e-12;
            const bool ok = std::abs(e.value - exact) <= band;
            diag2.rows.push_back(
                bound_row({{"p", p}}, e.value, e.std_error, exact, (e.value - exact) / band, ok));
        }
    }

    // diagonal-subspace moment identity for k | n
    auto& ident = ctx.scan("diagonal-identity");
    {
        const auto nk_n = int_grid(ctx.cfg, "n", {4, 6, 6});
        const auto nk_k = int_grid(ctx.cfg, "k", {2, 3, 2});
        for (std::size_t i = 0; i < nk_n.size() && i < nk_k.size(); ++i) {
            const Subspace E = Subspace::diagonal(nk_n[i], nk_k[i]);
            for (double p : ctx.cfg.grid_or("p_identity", {2.0, 3.0, 4.0})) {
                const Estimate e = sections::section_pmoment_ratio(E, p, N, ctx.next_stream());
                const double exact =
                    std::pow(double(nk_k[i]) / double(nk_n[i]), 0.5 * p - 1.0);
                const double band = z * e.std_error + 1e-12;
                const bool ok = std::abs(e.value - exact) <= band;
                ident.rows.push_back(bound_row(
                    {{"p", p}, {"n", double(nk_n[i])}, {"k", double(nk_k[i])}}, e.value,
                    e.std_error, exact, (e.value - exact) / band, ok));
            }
        }
    }

    // the p-th moment ratio is nonincreasing in p on random subspaces
    auto& scan = ctx.scan("ratio-p-scan");
    auto& mono = ctx.scan("p-monotonicity");
    {
        const int n = int_grid(ctx.cfg, "scan_n", {4}).front();
        const int k = int_grid(ctx.cfg, "scan_k", {2}).front();
        const int count = static_cast<int>(ctx.cfg.scalar_or("subspaces", 10));
        const auto ps = ctx.cfg.grid_or("p", {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0});
        Rng sub_rng(ctx.next_stream());
        for (int s = 0; s < count; ++s) {
            const Subspace E = Subspace::random(n, k, sub_rng);
            const auto ests = sections::section_pmoment_ratio_scan(E, ps, N, ctx.next_stream());
            std::vector<sections::ScanPoint> pts;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                pts.push_back({ps[i], ests[i]});
                scan.rows.push_back(info_row({{"p", ps[i]}, {"subspace", double(s)}},
                                             ests[i].value, ests[i].std_error));
            }
            const bool ok = sections::scan_monotone_within_ci(pts, -1, z);
            mono.rows.push_back(
                bound_row({{"subspace", double(s)}}, ok ? 1.0 : 0.0, -1.0, 1.0, 0.0, ok));
        }
    }

    // peaked-ordering cases for the tilted densities, by quadrature
    auto& peaked = ctx.scan("peaked-order");
    {
        struct Case {
            const char* label;
            double p1, l1, p2, l2;
        };
        // one parameter pair per ordering case
        const Case cases[] = {
            {"a", 2.5, 0.1, 3.0, 5.0},   // q >= 2, alpha(p,l1) > alpha(q,l2)
            {"b", 0.5, 5.0, 1.5, 0.1},   // q < 2, alpha(p,l1) < alpha(q,l2)
            {"c", 1.0, 1.0, 2.0, 1.0},   // p < 2 <= q, unconditional
            {"d", 1.5, 2.0, 1.5, 0.5},   // p < 2 fixed, larger lambda less peaked
            {"e", 3.0, 0.5, 3.0, 2.0},   // p > 2 fixed, smaller lambda less peaked
        };
        std::vector<double> agrid;
        for (int i = 1; i <= 50; ++i) agrid.push_back(0.06 * i);
        int ci = 0;
        for (const auto& c : cases) {
            const sections::TiltedDensity d1(c.p1, c.l1), d2(c.p2, c.l2);
            const auto rep = sections::peaked_compare(d1, d2, agrid, 1e-8);
            double worst = 0.0;
            for (const auto& row : rep.rows) {
                const double diff = rep.predicted == sections::PeakedOrder::second_below
                                        ? row.mass2 - row.mass1
                                        : row.mass1 - row.mass2;
                worst = std::max(worst, diff);
            }
            peaked.rows.push_back(bound_row({{"case", double(ci++)}},
                                            worst, -1.0, 1e-8, 1e-8 - worst,
                                            rep.asserted && rep.pass));
        }
    }

    // normalized alpha comparison across p < q
    auto& alpha_cmp = ctx.scan("alpha-comparison");
    {
        const double pairs[][3] = {{1.0, 2.0, 1.0}, {2.0, 4.0, 5.0}, {0.5, 1.5, 0.3}};
        int i = 0;
        for (const auto& pr : pairs) {
            const auto cmp = sections::normalized_alpha_comparison(pr[0], pr[1], pr[2]);
            alpha_cmp.rows.push_back(bound_row({{"pair", double(i++)}, {"lambda", pr[2]}},
                                               cmp.lhs, -1.0, cmp.rhs, cmp.rhs - cmp.lhs,
                                               cmp.strict));
        }
    }
}

// ---------------------------------------------------------------------------

void suite_sections_lambda_scan(SuiteContext& ctx) {
    const double z = ctx.cfg.confidence_z;
    const std::size_t N = ctx.cfg.samples;
    const int n = int_grid(ctx.cfg, "n", {4}).front();
    const int k = int_grid(ctx.cfg, "k", {2}).front();
    Rng sub_rng(ctx.next_stream());
    const Subspace E = Subspace::random(n, k, sub_rng);

    // F(p) is nondecreasing on (0, 2] and >= 1 beyond
    auto& fscan = ctx.scan("normalized-laplace-scan");
    {
        const double lambda = ctx.cfg.scalar_or("lambda_base", 1.0);
        const auto ps = ctx.cfg.grid_or("p", {0.5, 1.0, 1.5, 2.0, 3.0, 4.0});
        std::vector<sections::ScanPoint> low;
        for (double p : ps) {
            const Estimate e = sections::normalized_laplace_ratio(E, p, lambda, N, ctx.next_stream());
            fscan.rows.push_back(info_row({{"p", p}}, e.value, e.std_error));
            if (p <= 2.0) low.push_back({p, e});
        }
        const bool mono = sections::scan_monotone_within_ci(low, +1, z);
        bool above = true;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (ps[i] >= 2.0 && fscan.rows[i].value < 1.0 - z * fscan.rows[i].std_error - 1e-12)
                above = false;
        auto& verdict = ctx.scan("normalized-laplace-verdict");
        verdict.rows.push_back(bound_row({{"which", 0.0}}, mono ? 1.0 : 0.0, -1.0, 1.0, 0.0, mono));
        verdict.rows.push_back(bound_row({{"which", 1.0}}, above ? 1.0 : 0.0, -1.0, 1.0, 0.0, above));
    }

    // r_p(lambda) scans: nonincreasing for p <= 2, nondecreasing for p >= 2
    auto& rscan = ctx.scan("laplace-ratio-scan");
    {
        const auto lambdas = ctx.cfg.grid_or("lambda", {0.0, 0.5, 1.0, 2.0, 4.0, 8.0});
        for (double p : ctx.cfg.grid_or("p_scan", {1.0, 3.0})) {
            const auto pts = sections::laplace_ratio_scan(E, p, lambdas, N, ctx.next_stream());
            for (const auto& pt : pts)
                rscan.rows.push_back(
                    info_row({{"lambda", pt.x}, {"p", p}}, pt.est.value, pt.est.std_error));
            const int dir = p <= 2.0 ? -1 : +1;
            const bool mono = sections::scan_monotone_within_ci(pts, dir, z);
            const bool at_zero = pts.front().x != 0.0 || pts.front().est.value == 1.0;
            rscan.rows.push_back(bound_row({{"lambda", -1.0}, {"p", p}}, mono ? 1.0 : 0.0, -1.0,
                                           1.0, 0.0, mono && at_zero));
        }
    }

    // volume ratio of sections: extrapolated large-lambda limit
    auto& vr = ctx.scan("volume-ratio");
    {
        const auto ps = ctx.cfg.grid_or("p_volume", {1.0, 1.5, 2.0, 3.0});
        // exact 1-d oracle: the diagonal chord of the cross-polytope
        const Subspace D = Subspace::diagonal(2, 1);
        const auto d_est = sections::volume_ratio(D, 1.0, std::min<std::size_t>(N, 40000),
                                                  ctx.next_stream());
        const double d_exact = 1.0 / std::sqrt(2.0);
        vr.rows.push_back(bound_row(
            {{"p", 1.0}, {"case", 0.0}}, d_est.est.value, d_est.est.std_error, d_exact,
            (d_est.est.value - d_exact) / std::max(d_est.est.std_error, 1e-300),
            std::abs(d_est.est.value - d_exact) <= z * d_est.est.std_error + 1e-9));
        for (double p : ps) {
            const auto est = sections::volume_ratio(E, p, std::min<std::size_t>(N, 40000),
                                                    ctx.next_stream());
            // volume comparison with the coordinate section: <= 1 for p <= 2,
            // >= 1 for p >= 2
            bool ok = true;
            if (p <= 2.0) ok = est.est.value <= 1.0 + z * est.est.std_error + 1e-9;
            if (p >= 2.0) ok = ok && est.est.value >= 1.0 - z * est.est.std_error - 1e-9;
            vr.rows.push_back(bound_row({{"p", p}, {"case", 1.0}}, est.est.value,
                                        est.est.std_error, 1.0, est.extrapolation_residual, ok));
        }
    }
}

// ---------------------------------------------------------------------------

void suite_cube(SuiteContext& ctx) {
    const double z = ctx.cfg.confidence_z;
    const std::size_t N = ctx.cfg.samples;
    const int n = int_grid(ctx.cfg, "n", {6}).front();
    const int k = int_grid(ctx.cfg, "k", {3}).front();
    int count = static_cast<int>(ctx.cfg.scalar_or("subspaces", 10));
    const auto rs = ctx.cfg.grid_or("r", {0.5, 1.0, 1.5, 2.0, 3.0});

    // subspace source: random (default), axis, diagonal, or a saved basis
    std::string source = "random";
    if (ctx.cfg.strings.count("subspace")) source = ctx.cfg.strings.at("subspace");
    std::optional<Subspace> fixed;
    if (ctx.cfg.strings.count("subspace_file")) {
        std::ifstream f(ctx.cfg.strings.at("subspace_file"));
        if (!f) throw std::invalid_argument("cube: cannot open subspace_file");
        fixed = Subspace::load(f);
    } else if (source == "axis") {
        fixed = Subspace::axis(n, k);
    } else if (source == "diagonal") {
        fixed = Subspace::diagonal(n, k);
    } else if (source != "random") {
        throw std::invalid_argument("cube: unknown subspace source '" + source + "'");
    }
    if (fixed) count = 1;

    auto& sandwich = ctx.scan("cube-sandwich");
    auto& ratio = ctx.scan("cube-ratio-scan");
    auto& mono = ctx.scan("cube-monotonicity");
    Rng sub_rng(ctx.next_stream());
    for (int s = 0; s < count; ++s) {
        const Subspace E = fixed ? *fixed : Subspace::random(n, k, sub_rng);
        const auto pts = sections::cube_ratio_scan(E, rs, N, ctx.next_stream());
        const double scale = std::sqrt(double(n) / k);
        for (const auto& pt : pts) {
            const double r = pt.x;
            const double lower = sections::cube_gaussian_exact(k, r);
            const double upper = sections::cube_gaussian_exact(k, r * scale);
            const double gamma_e = pt.est.value * lower;  // undo the ratio normalization
            const double gamma_se = pt.est.std_error * lower;
            const bool ok = gamma_e >= lower - z * gamma_se - 1e-12 &&
                            gamma_e <= upper + z * gamma_se + 1e-12;
            sandwich.rows.push_back(bound_row({{"r", r}, {"subspace", double(s)}, {"upper", upper}},
                                              gamma_e, gamma_se, lower, (gamma_e - lower),
                                              ok));
            ratio.rows.push_back(
                info_row({{"r", r}, {"subspace", double(s)}}, pt.est.value, pt.est.std_error));
        }
        const bool ok = sections::scan_monotone_within_ci(pts, -1, z);
        mono.rows.push_back(bound_row({{"subspace", double(s)}}, ok ? 1.0 : 0.0, -1.0, 1.0, 0.0, ok));
    }
}

// ---------------------------------------------------------------------------

void suite_brascamp_lieb(SuiteContext& ctx) {
    const double z = ctx.cfg.confidence_z;
    const std::size_t N = ctx.cfg.samples;
    const int n = int_grid(ctx.cfg, "n", {6}).front();
    const int k = int_grid(ctx.cfg, "k", {3}).front();
    const auto ps = ctx.cfg.grid_or("p", {2.0, 3.0, 4.0});
    const auto lambdas = ctx.cfg.grid_or("lambda", {0.5, 2.0});

    Rng sub_rng(ctx.next_stream());
    const Subspace E = Subspace::random(n, k, sub_rng);
    const Subspace D = Subspace::diagonal(n, k);

    auto& laplace = ctx.scan("laplace-upper");
    for (double p : ps)
        for (double lambda : lambdas) {
            const auto c = sections::laplace_upper_bound_check(E, p, lambda, z, N, ctx.next_stream());
            laplace.rows.push_back(bound_row({{"lambda", lambda}, {"p", p}, {"diagonal", 0.0}},
                                             c.estimate, c.estimate_se, c.bound, c.slack_sigma,
                                             c.pass));
            // the diagonal subspace attains equality
            const auto cd = sections::laplace_upper_bound_check(D, p, lambda, z, N, ctx.next_stream());
            const bool eq = std::abs(cd.estimate - cd.bound) <= z * cd.estimate_se + 1e-12;
            laplace.rows.push_back(bound_row({{"lambda", lambda}, {"p", p}, {"diagonal", 1.0}},
                                             cd.estimate, cd.estimate_se, cd.bound, cd.slack_sigma,
                                             eq));
        }

    auto& momentsb = ctx.scan("moment-bounds");
    for (double p : ps) {
        const double beta = std::min(2.0, p);
        const double alpha_neg = 0.5 * (k - 1) + 0.25;
        const auto rep = sections::bl_moment_bounds_check(E, p, beta, alpha_neg, z, N, ctx.next_stream());
        momentsb.rows.push_back(bound_row({{"p", p}, {"side", 0.0}, {"beta", beta}},
                                          rep.positive.estimate, rep.positive.estimate_se,
                                          rep.positive.bound, rep.positive.slack_sigma,
                                          rep.positive.pass));
        momentsb.rows.push_back(bound_row({{"p", p}, {"side", 1.0}, {"alpha", alpha_neg}},
                                          rep.negative.estimate, rep.negative.estimate_se,
                                          rep.negative.bound, rep.negative.slack_sigma,
                                          rep.negative.pass));
    }
}

// ---------------------------------------------------------------------------

void suite_balance(SuiteContext& ctx) {
    const int instances = static_cast<int>(ctx.cfg.scalar_or("instances", 20));
    const int max_m = int_grid(ctx.cfg, "m", {16}).front();
    const int max_d = int_grid(ctx.cfg, "d", {8}).front();
    Rng rng(ctx.next_stream());

    auto& scan = ctx.scan("balance");
    std::vector<double> constants;
    for (int inst = 0; inst < instances; ++inst) {
        const int m = 4 + static_cast<int>(rng.uniform() * (max_m - 3));
        const int d = 2 + static_cast<int>(rng.uniform() * (max_d - 1));
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
        const auto greedy = apps::balance_greedy(set, PExponent::infinity());
        const auto rep = apps::komlos_bound_check(set, ex);
        constants.push_back(rep.constant);
        ReportRow row = bound_row({{"instance", double(inst)},
                                   {"m", double(m)},
                                   {"d", double(d)},
                                   {"constant", rep.constant}},
                                  ex.value, -1.0, greedy.value, greedy.value - ex.value,
                                  greedy.value >= ex.value - 1e-12);
        char hash_buf[32];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(set.content_hash()));
        row.note = std::string("pointset:fnv1a64:") + hash_buf;
        scan.rows.push_back(std::move(row));
    }
    auto& summary = ctx.scan("balance-summary");
    const double stab = stability_ratio(constants);
    const double tol = ctx.cfg.scalar_or("stability_tol", 2.0);
    summary.rows.push_back(bound_row({{"which", 0.0}}, stab, -1.0, tol, tol - stab, stab <= tol));
    summary.rows.push_back(info_row({{"which", 1.0}},
                                    *std::max_element(constants.begin(), constants.end())));
}

// ---------------------------------------------------------------------------

void suite_cover(SuiteContext& ctx) {
    const auto epss = ctx.cfg.grid_or("eps", {0.25, 0.5, 1.0});
    const auto ps = ctx.cfg.grid_or("p", {2.0, 4.0, std::numeric_limits<double>::infinity()});
    const auto ms = int_grid(ctx.cfg, "m", {4, 6, 8});
    const auto ds = int_grid(ctx.cfg, "d", {4, 5, 6});
    Rng rng(ctx.next_stream());

    auto& scan = ctx.scan("cover");
    std::vector<double> constants;
    for (std::size_t inst = 0; inst < ms.size() && inst < ds.size(); ++inst) {
        const int m = ms[inst];
        const int d = ds[inst];
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m));
        for (auto& x : pts) {
            x.resize(static_cast<std::size_t>(d));
            double s = 0.0;
            for (double& v : x) {
                v = rng.normal();
                s += v * v;
            }
            const double scale = std::pow(rng.uniform_pos(), 1.0 / d) / std::sqrt(s);
            for (double& v : x) v *= scale;  // uniform in the unit l_2 ball
        }
        const apps::PointSet set(std::move(pts));
        for (double eps : epss)
            for (double pv : ps) {
                const PExponent p(pv);
                const auto res = apps::covering_count(set, eps, p);
                const auto bound = apps::covering_bound_check(m, eps, p, res.count);
                if (res.count > 1) constants.push_back(bound.constant);
                ReportRow row = info_row({{"eps", eps},
                                          {"p", std::isfinite(pv) ? pv : 0.0},
                                          {"instance", double(inst)},
                                          {"m", double(m)},
                                          {"d", double(d)},
                                          {"constant", bound.constant},
                                          {"mesh", double(res.mesh_size)},
                                          {"pitch_ok", res.resolution_sufficient ? 1.0 : 0.0}},
                                         double(res.count));
                char hash_buf[32];
                std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                              static_cast<unsigned long long>(set.content_hash()));
                row.note = std::string("pointset:fnv1a64:") + hash_buf;
                scan.rows.push_back(std::move(row));
            }
    }
    auto& summary = ctx.scan("cover-summary");
    const double stab = stability_ratio(constants);
    const double tol = ctx.cfg.scalar_or("stability_tol", 3.0);
    summary.rows.push_back(bound_row({{"which", 0.0}}, stab, -1.0, tol, tol - stab, stab <= tol));
}

} // namespace

ExperimentReport run_suite(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport rep;
    rep.suite = config.suite;
    rep.config_echo = config.canonical_text();
    rep.rng_provenance = "mt19937_64 seeded by splitmix64(seed=" + std::to_string(config.seed) +
                         "), one stream id per estimator in execution order";
    SuiteContext ctx{config, {}, 0};

    const auto t0 = std::chrono::steady_clock::now();
    using SuiteFn = void (*)(SuiteContext&);
    static const std::map<std::string, SuiteFn> dispatch = {
        {"sampling-oracles", suite_sampling_oracles},
        {"moments", suite_moments},
        {"khinchine", suite_khinchine},
        {"psi2", suite_psi2},
        {"slabs", suite_slabs},
        {"sections-p-scan", suite_sections_p_scan},
        {"sections-lambda-scan", suite_sections_lambda_scan},
        {"cube", suite_cube},
        {"brascamp-lieb", suite_brascamp_lieb},
        {"balance", suite_balance},
        {"cover", suite_cover},
    };
    try {
        dispatch.at(config.suite)(ctx);
    } catch (const std::exception& e) {
        // keep whatever was produced so far; the report records the failure
        rep.errors.push_back(std::string("suite aborted: ") + e.what());
    }
    rep.scans.assign(ctx.scans.begin(), ctx.scans.end());

    bool pass = rep.errors.empty();
    for (const auto& scan : rep.scans)
        for (const auto& row : scan.rows)
            if (row.pass == 0) pass = false;
    rep.pass = pass;
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ExperimentReport run_suite_and_write(const ExperimentConfig& config) {
    ExperimentReport rep = run_suite(config);
    std::filesystem::create_directories(config.output_dir);
    const std::string base = config.output_dir + "/" + config.suite;
    write_text_file(base + "-report.json", rep.to_json());
    write_text_file(base + "-rows.csv", rep.rows_csv());
    return rep;
}

} // namespace lpball::runner
