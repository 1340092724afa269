#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cmg/metric_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

struct GraphEdge {
    int u, v;
    Rational len;
};

/// Edge-weighted connected graph with its exact shortest-path metric.
/// Distances are stored as integer ticks over a common denominator so the
/// cached matrix stays compact and comparisons stay exact. Vertices are the
/// integers 0..n-1 in construction order; labels are provenance only.
class GraphSpace {
  public:
    GraphSpace() = default;
    GraphSpace(int n, std::vector<GraphEdge> edges, std::vector<std::string> labels = {},
               bool defer_metric = false, bool allow_disconnected = false);

    bool connected() const { return connected_; }

    int n() const { return n_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const std::string& label(int v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool unit_lengths() const { return unit_; }
    std::int64_t tick_den() const { return tick_den_; }

    /// Shortest-path distance in ticks; dist(i,j) = ticks / tick_den.
    std::int64_t dist_ticks(int i, int j) const;
    Rational dist(int i, int j) const { return Rational(dist_ticks(i, j), tick_den_); }
    Rational diameter() const;
    std::int64_t diameter_ticks() const;

    const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_[v]; } // (vertex, edge idx)
    std::int64_t edge_ticks(int e) const { return edge_ticks_[e]; }

    /// Distances from one source without materializing the full matrix.
    std::vector<std::int64_t> dist_row_from(int src) const;

    /// Shortest path between x and y, deterministic: each step takes the
    /// least-index predecessor among those on a shortest path.
    std::vector<int> geodesic(int x, int y) const;

    bool metric_cached() const { return !dist_.empty(); }
    void ensure_metric() const;

    // deterministic builders used across the test corpus and generators
    static GraphSpace path(int num_vertices);
    static GraphSpace cycle(int num_vertices);
    static GraphSpace grid(int rows, int cols);
    static GraphSpace random_tree(int num_vertices, std::uint64_t seed);
    static GraphSpace complete_from_metric(const FiniteMetricSpace& m);

  private:
    int n_ = 0;
    std::vector<GraphEdge> edges_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<std::int64_t> edge_ticks_;
    std::int64_t tick_den_ = 1;
    bool unit_ = true;
    bool connected_ = true;
    mutable std::vector<std::int64_t> dist_; // lazy n*n

    void compute_metric() const;
};

/// Exact Hausdorff distance (in ticks) between two nonempty vertex sets.
std::int64_t hausdorff_ticks(const GraphSpace& g, const std::vector<int>& a, const std::vector<int>& b);
Rational hausdorff(const GraphSpace& g, const std::vector<int>& a, const std::vector<int>& b);

/// Attaches a pendant path of `ray_length` unit edges to every vertex.
GraphSpace visualize(const GraphSpace& g, int ray_length);
GraphSpace visualize(const FiniteMetricSpace& m, int ray_length);

/// Deterministic pseudo-random stream (splitmix64) used by every seeded builder.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

} // namespace cmg
