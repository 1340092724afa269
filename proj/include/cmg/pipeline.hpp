#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cmg/cover_trees.hpp"
#include "cmg/graph_space.hpp"
#include "cmg/maps.hpp"
#include "cmg/median_graph.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Ambient median structure on int64 vertex codes; backed by an explicit
/// median graph or by a lazy product of trees.
struct MedianAmbient {
    std::int64_t n = 0;
    std::int64_t tick_den = 1;
    std::function<std::int64_t(std::int64_t, std::int64_t)> dist_ticks;
    std::function<std::int64_t(std::int64_t, std::int64_t, std::int64_t)> median;
    struct Hull {
        std::vector<std::int64_t> vertices;
        int iterations = 0;
    };
    std::function<Hull(const std::vector<std::int64_t>&)> hull;
};

MedianAmbient ambient_from(const MedianGraph& q);
MedianAmbient ambient_from(const TreeProduct& p, size_t hull_cap = 100000);

struct CubulationResult {
    std::vector<std::int64_t> image;       // source vertex -> ambient code
    std::vector<std::int64_t> closure;     // median closure M of the image
    bool closure_connected = false;
    std::vector<std::int64_t> hull;        // Q' = hull(M)
    int hull_iterations = 0;
    std::vector<std::int64_t> final_image; // image gated into Q'
    QIReport qi;
    Rational qm_defect{0};
    Rational hausdorff_image_closure{0};
};

/// Median closure of the image, its hull, and the gate-composed final map
/// with measured distortion and quasimedian defect.
CubulationResult cubulate(const GraphSpace& source, const MedianFn& src_median,
                          const MedianAmbient& ambient, const std::vector<std::int64_t>& embedding,
                          size_t closure_cap = 60000, std::uint64_t seed = 0xc0b5ULL);

/// Largest distance from a median mu(x, y1, y2) to the subset, over all
/// ambient x and subset pairs; the subset is k-median-quasiconvex for any
/// k at least this value.
Rational median_quasiconvexity_constant(const GraphSpace& space, const MedianFn& median,
                                        const std::vector<int>& subset);

struct ConvexityResult {
    std::vector<std::int64_t> y_prime; // convex subcomplex matched to Y
    Rational hausdorff{0};             // between the image of Y and Y'
    std::vector<int> preimage;         // quasiinverse pull-back of Y'
    Rational k0_reverse{0};            // measured quasiconvexity of the pull-back
};

/// Forward: hull of the image of a k-median-quasiconvex subset, with the
/// realized Hausdorff distance. Reverse: gate-based nearest-point pull-back
/// and its measured quasiconvexity constant.
ConvexityResult convexity_correspondence(const GraphSpace& source, const MedianFn& src_median,
                                         const CubulationResult& cub, const MedianAmbient& ambient,
                                         const std::vector<int>& subset, const Rational& k);

/// Pull a convex ambient subcomplex back through the gate-based quasiinverse.
std::vector<int> quasiinverse_pullback(const CubulationResult& cub, const MedianAmbient& ambient,
                                       const std::vector<std::int64_t>& subcomplex);

struct ApproxSetsReport {
    std::vector<int> hull1, hull2;
    int differing_hyperplanes = 0;
    bool bound_checked = false; // Hausdorff(F1,F2) <= K so the 2kK bound applies
    bool bound_ok = true;
    std::vector<int> core1, core2; // mutually gated subcomplexes
    bool gate_isomorphism = false;
    bool cores_dual_to_common = false; // hyperplanes crossing a core = common set
    Rational hausdorff_cores{0};
    bool hausdorff_cores_ok = false; // <= 2K
};

/// Hulls of two nearby finite sets, the hyperplanes crossing exactly one of
/// them, and the gate isomorphism between the common-hyperplane cores.
ApproxSetsReport approximate_finite_sets(const MedianGraph& q, const std::vector<int>& f1,
                                         const std::vector<int>& f2, const Rational& K);

/// Explicit unit graph induced on ambient codes (edges where distance is one
/// tick); used to re-run the pipeline on a cubulation's hull.
GraphSpace induced_graph(const MedianAmbient& ambient, const std::vector<std::int64_t>& verts);

/// Worst displacement between the raw embedding and its gated image.
Rational gating_displacement(const CubulationResult& cub, const MedianAmbient& ambient);

} // namespace cmg
