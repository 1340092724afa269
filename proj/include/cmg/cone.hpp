#pragma once

#include <cstdint>
#include <vector>

#include "cmg/graph_space.hpp"
#include "cmg/maps.hpp"
#include "cmg/median_graph.hpp"
#include "cmg/metric_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Multiplies all distances so the diameter becomes 1/2; the factor is
/// accumulated into `scale`. One-point spaces pass through unchanged.
FiniteMetricSpace rescale(const FiniteMetricSpace& m);

/// Levelled maximal r^k-separated nets of a bounded space, greedy in
/// seeded-shuffled point order. Level k carries balls of radius 2 r^k.
struct NetHierarchy {
    FiniteMetricSpace base;
    Rational r;
    int k_max = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> levels; // point indices, in insertion order

    Rational ball_radius(int k) const { return Rational(2) * r.pow(k); }
    /// Realized open/closed balls as base-point bitsets.
    VertexBits open_ball(int point, const Rational& radius) const;
    VertexBits closed_ball(int point, const Rational& radius) const;
};

NetHierarchy build_nets(const FiniteMetricSpace& m, const Rational& r, int k_max, std::uint64_t seed);

/// The cone graph on a net hierarchy: unit edges, level function, and the
/// base point each vertex represents.
struct ConeGraph {
    GraphSpace g;
    std::vector<int> level;
    std::vector<int> base_point;
    int apex = 0;
    int k_max = 0;

    int vertex_at(int lvl, int point) const; // -1 if that point is not in V_lvl
};

ConeGraph build_cone(const NetHierarchy& nets);

/// Rooted b-ary tree of the given depth together with its leaf ultrametric
/// (deepest-common-ancestor depth, scaled to diameter 1/2), the nets and cone
/// on the boundary, and the level correspondence with measured distortion.
struct TreeBoundaryInstance {
    GraphSpace tree;
    std::vector<int> depth_of;   // per tree vertex
    std::vector<int> leaf_vertex; // leaf index -> tree vertex
    FiniteMetricSpace boundary;
    NetHierarchy nets;
    ConeGraph cone;
    PointMap correspondence; // tree vertex -> cone vertex
    QIReport distortion;
};

TreeBoundaryInstance tree_boundary_instance(int depth, int branching, const Rational& r,
                                            std::uint64_t seed, int k_max = -1,
                                            const Rational& distance_ratio = Rational(0),
                                            size_t leaf_cap = 4096);

} // namespace cmg
