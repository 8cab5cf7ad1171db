#pragma once

#include "lpball/pexponent.hpp"
#include "lpball/pointset.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lpball::apps {

struct CoveringResult {
    std::size_t count = 0;                       // N: number of centers
    std::vector<std::vector<double>> centers;    // subset of the mesh
    std::size_t mesh_size = 0;
    int resolution = 0;                          // simplex-lattice resolution t
    double mesh_pitch = 0.0;                     // max neighbor step in l_p
    bool resolution_sufficient = false;          // pitch <= eps / 2
    bool truncated = false;                      // center cap reached
};

/// Greedy eps-net of absconv{x_1, ..., x_m} in the l_p metric (p >= 2).
/// The body is meshed by a simplex lattice over the 2m signed vertices; the
/// lattice resolution targets pitch eps/4 but is capped by mesh_budget, and
/// the achieved pitch is reported (resolution_sufficient records whether it
/// stayed within eps/2). Centers are chosen by farthest-point traversal, so
/// every mesh point ends up within eps of a center and N is nonincreasing in
/// eps on a fixed mesh. N certifies a cover of the mesh; it upper-bounds the
/// covering number of the body up to the mesh resolution.
CoveringResult covering_count(const PointSet& points, double eps, const PExponent& p,
                              std::size_t mesh_budget = 250000, int resolution_override = 0,
                              std::size_t center_cap = 20000);

struct CoveringBoundReport {
    double constant = 0.0;  // log N * eps^{p/(p-1)} / log max(m, 2)
    std::string regime_note;
};

/// Implied constant of the covering bound; reports only (no pass/fail here:
/// stability across a grid is the caller's check).
CoveringBoundReport covering_bound_check(int m, double eps, const PExponent& p, std::size_t count);

/// The raw simplex-lattice mesh of absconv(points) at resolution t
/// (exposed for oracle cross-checks in tests).
std::vector<std::vector<double>> covering_mesh(const PointSet& points, int resolution);

} // namespace lpball::apps
