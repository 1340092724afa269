#pragma once

#include <string>
#include <vector>

#include "cmg/cone.hpp"
#include "cmg/median_graph.hpp"
#include "cmg/metric_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

struct CoverElement {
    int colour = 0;
    int level = 0;
    std::vector<int> points; // sorted base-point indices, nonempty
    VertexBits bits;
    Rational nominal_scale{1};
};

/// Sequence of coloured covers of a bounded base: realized diameters shrink
/// like r^k, same-colour families are disjoint, and same-colour elements are
/// nested-or-separated at margin eps*r^k. Level-0 is {Z} in every colour.
struct ColouredCoverSequence {
    FiniteMetricSpace base;
    Rational r;
    Rational eps;
    int num_colours = 1;
    int k_max = 0;
    std::string strategy;
    std::vector<CoverElement> elements;
    std::vector<std::vector<std::vector<int>>> by_colour_level; // [colour][level] -> element ids

    /// Points of Z strictly within radius of the element (realized set).
    VertexBits neighbourhood(int element_id, const Rational& radius) const;
};

enum class CoverStrategy { Ultrametric, LineDyadic, Grid };
CoverStrategy cover_strategy_from_string(const std::string& s);
std::string to_string(CoverStrategy s);

/// Strategy constructors. Every strategy needs 0 < r < 1/7 and 4r < eps <= 1
/// (pass eps = 0 for the default). Validity ranges per strategy:
///  - ultrametric: any base satisfying the ultrametric inequality; elements
///    are the closed balls of radius r^k/2, one colour, default eps 3/4.
///  - line_dyadic: base isometric to a subset of a line (coords recovered
///    from the matrix when absent); two colours of half-open windows
///    [(4i+2c)u - d, (4i+2c+2)u + d) with u = (3/8)r^k, d = (1/8)r^k;
///    requires r <= 1/32, default eps 1/2.
///  - grid: base with 2-d coords under the l1 metric; four colours from the
///    per-axis window product with u = (3/16)r^k, d = (1/16)r^k; requires
///    r <= 1/32, default eps 1/4.
/// All diameter/disjointness/nesting conditions are re-verified exactly on
/// the realized point sets after the build; failures raise BuildError naming
/// the violating pair.
ColouredCoverSequence build_covers(const FiniteMetricSpace& m, const Rational& r, Rational eps,
                                   int k_max, CoverStrategy strategy);

struct CoverConditionReport {
    bool c1_ok = true, disjoint_ok = true, cover_ok = true, c3_ok = true, c2_ok = true;
    std::vector<std::string> witnesses;
    bool all_ok() const { return c1_ok && disjoint_ok && cover_ok && c3_ok && c2_ok; }
};

/// Re-checks every condition; the ball-containment condition is checked for
/// every net vertex of each level against the previous cover level.
CoverConditionReport verify_cover_conditions(const ColouredCoverSequence& covers,
                                             const NetHierarchy& nets);

/// Conditions checkable without nets (used internally by build_covers).
CoverConditionReport check_cover_internal(const ColouredCoverSequence& covers);

} // namespace cmg
