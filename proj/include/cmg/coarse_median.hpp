#pragma once

#include <functional>
#include <vector>

#include "cmg/graph_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Vertex minimizing the summed distance to the three fixed geodesics of the
/// triple, least index on ties. Coincides with the exact median on trees.
int coarse_median(const GraphSpace& g, int x, int y, int z);

struct QgDefect {
    Rational hausdorff_to_geodesic;
    Rational backtrack;
};

/// Hausdorff distance from the path to the fixed geodesic joining its
/// endpoints, plus the worst backward move of d(p0, .) along the path.
QgDefect unparam_qg_defect(const GraphSpace& g, const std::vector<int>& path);

struct SegmentRange {
    int first, last; // inclusive indices into the path
};

struct LocalToGlobalInput {
    std::vector<int> path;
    std::vector<SegmentRange> beta; // disjoint, increasing; alphas are the complement
    Rational k;                     // hyperbolicity bound for the ambient graph
    Rational lambda;                // quasigeodesic constant (recorded)
    std::vector<std::pair<Rational, Rational>> f_samples; // (r, f(r)) pairs
    Rational l0;
};

struct LocalToGlobalReport {
    struct Overlap {
        int beta_index;
        int other_index; // index of the β_{j±2} or α_{j±1} segment
        bool other_is_beta;
        Rational r;
        Rational diameter;
        bool within_bound;
    };
    std::vector<Overlap> overlaps;
    std::vector<Rational> beta_lengths;
    bool lengths_ok = true;
    QgDefect defect;
    bool overlaps_ok = true;
};

/// Measures the hypotheses and conclusion of the local-to-global
/// concatenation criterion on an explicit alternating decomposition.
LocalToGlobalReport local_to_global_check(const GraphSpace& g, const LocalToGlobalInput& in);

} // namespace cmg
