#include "lpball/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpball::apps {

namespace {

// C(t + v - 1, v - 1), saturating at a large cap.
std::size_t lattice_size(int t, int v, std::size_t cap = std::numeric_limits<std::size_t>::max() / 4) {
    long double r = 1.0L;
    for (int i = 1; i < v; ++i) {
        r *= static_cast<long double>(t + i) / i;
        if (r > static_cast<long double>(cap)) return cap;
    }
    return static_cast<std::size_t>(r + 0.5L);
}

double lp_dist(const double* a, const double* b, int d, double p) {
    if (!std::isfinite(p)) {
        double m = 0.0;
        for (int i = 0; i < d; ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = a[i] - b[i];
            s += t * t;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(s, 1.0 / p);
}

void enumerate_lattice(const std::vector<std::vector<double>>& verts, int t, int d,
                       std::vector<double>& weights, std::size_t vi,
                       int remaining, std::vector<std::vector<double>>& out) {
    if (vi + 1 == verts.size()) {
        weights[vi] = static_cast<double>(remaining);
        std::vector<double> pt(static_cast<std::size_t>(d), 0.0);
        for (std::size_t k = 0; k < verts.size(); ++k) {
            const double w = weights[k] / t;
            if (w == 0.0) continue;
            for (int j = 0; j < d; ++j) pt[static_cast<std::size_t>(j)] += w * verts[k][static_cast<std::size_t>(j)];
        }
        out.push_back(std::move(pt));
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        weights[vi] = static_cast<double>(k);
        enumerate_lattice(verts, t, d, weights, vi + 1, remaining - k, out);
    }
}

std::vector<std::vector<double>> signed_vertices(const PointSet& points) {
    std::vector<std::vector<double>> verts;
    verts.reserve(2 * static_cast<std::size_t>(points.count()));
    for (const auto& x : points.points()) {
        verts.push_back(x);
        std::vector<double> neg(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) neg[j] = -x[j];
        verts.push_back(std::move(neg));
    }
    return verts;
}

} // namespace

std::vector<std::vector<double>> covering_mesh(const PointSet& points, int resolution) {
    if (resolution < 1) throw std::invalid_argument("covering_mesh: resolution >= 1");
    const auto verts = signed_vertices(points);
    std::vector<std::vector<double>> mesh;
    mesh.reserve(lattice_size(resolution, static_cast<int>(verts.size()), 1u << 20));
    std::vector<double> weights(verts.size(), 0.0);
    enumerate_lattice(verts, resolution, points.ambient_dim(), weights, 0, resolution, mesh);
    return mesh;
}

CoveringResult covering_count(const PointSet& points, double eps, const PExponent& p,
                              std::size_t mesh_budget, int resolution_override,
                              std::size_t center_cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("covering_count: eps > 0");
    if (p.is_finite() && p.value() < 2.0)
        throw std::invalid_argument("covering_count: p >= 2 required");
    if (points.count() > 12 || points.ambient_dim() > 16)
        throw std::invalid_argument("covering_count: desk scale only (m <= 12, d <= 16)");
    for (const auto& x : points.points()) {
        double s = 0.0;
        for (double v : x) s += v * v;
        if (s > 1.0 + 1e-9) throw std::invalid_argument("covering_count: points must lie in the unit l_2 ball");
    }

    const auto verts = signed_vertices(points);
    const int v = static_cast<int>(verts.size());
    const int d = points.ambient_dim();

    double diam = 0.0;
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j)
            diam = std::max(diam, lp_dist(verts[static_cast<std::size_t>(i)].data(),
                                          verts[static_cast<std::size_t>(j)].data(), d, p.value()));

    CoveringResult res;
    int t;
    if (resolution_override > 0) {
        t = resolution_override;
    } else if (diam == 0.0) {
        t = 1;
    } else {
        // target pitch eps/4, capped by the mesh budget
        const int t_target = std::max(1, static_cast<int>(std::ceil(4.0 * diam / eps)));
        t = 1;
        while (t < t_target && lattice_size(t + 1, v) <= mesh_budget) ++t;
    }
    res.resolution = t;
    res.mesh_pitch = diam / t;
    res.resolution_sufficient = res.mesh_pitch <= 0.5 * eps;

    const auto mesh = covering_mesh(points, t);
    res.mesh_size = mesh.size();

    // farthest-point traversal: the minimal distances are nonincreasing, so
    // the prefix taken before they drop to eps is an eps-net of the mesh and
    // its size is automatically nonincreasing in eps
    std::vector<double> dist(mesh.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (;;) {
        const auto& c = mesh[next];
        res.centers.push_back(c);
        if (res.centers.size() >= center_cap) {
            res.truncated = true;
            break;
        }
        double maxd = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < mesh.size(); ++i) {
            const double cd = lp_dist(mesh[i].data(), c.data(), d, p.value());
            if (cd < dist[i]) dist[i] = cd;
            if (dist[i] > maxd) {
                maxd = dist[i];
                arg = i;
            }
        }
        if (maxd <= eps) break;
        next = arg;
    }
    res.count = res.centers.size();
    return res;
}

CoveringBoundReport covering_bound_check(int m, double eps, const PExponent& p, std::size_t count) {
    if (count == 0) throw std::invalid_argument("covering_bound_check: count >= 1");
    CoveringBoundReport rep;
    const double expo = p.is_finite() ? p.value() / (p.value() - 1.0) : 1.0;
    rep.constant = std::log(static_cast<double>(count)) * std::pow(eps, expo) /
                   std::log(std::max(static_cast<double>(m), 2.0));
    if (!p.is_finite())
        rep.regime_note = "p = inf: exponent p/(p-1) -> 1";
    else if (p.value() == 2.0)
        rep.regime_note = "p = 2: Carl-Pajor regime";
    else
        rep.regime_note = "interpolated regime, exponent " + std::to_string(expo);
    return rep;
}

} // namespace lpball::apps
