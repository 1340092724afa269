#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmg/graph_space.hpp"
#include "cmg/maps.hpp"

namespace cmg {

/// Fixed-size bitset over graph vertices.
struct VertexBits {
    std::vector<std::uint64_t> w;
    int n = 0;
    explicit VertexBits(int size = 0) : w((size + 63) / 64, 0), n(size) {}
    void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    int count() const;
    bool intersects(const VertexBits& o) const;
    bool is_subset_of(const VertexBits& o) const;
    std::vector<int> to_vector() const;
    bool operator==(const VertexBits& o) const { return w == o.w; }
    bool operator<(const VertexBits& o) const { return w < o.w; }
};

/// Djokovic edge class of a median graph together with its two half-spaces.
struct Hyperplane {
    std::vector<int> edge_ids;
    VertexBits side_a; // half-space containing vertex 0
    VertexBits side_b;
    bool separates(int x, int y) const { return side_a.test(x) != side_a.test(y); }
};

struct ScanPolicy {
    size_t exhaustive_cap = 250000; // max number of triples/pairs scanned exhaustively
    size_t sample = 20000;
    std::uint64_t seed = 0x5eedULL;
};

class MedianGraph;
struct MedianVerifyResult;

struct ConvexSubgraph {
    const MedianGraph* parent = nullptr;
    std::vector<int> vertices;
};

struct HullResult {
    std::vector<int> vertices;
    int iterations = 0;
};

struct QuotientResult; // below

/// Median graph on the 0-skeleton view: unit-length graph where every triple
/// has a one-vertex interval intersection.
class MedianGraph {
  public:
    static MedianVerifyResult verify(GraphSpace g, const ScanPolicy& pol = {});

    const GraphSpace& space() const { return g_; }
    int n() const { return g_.n(); }

    bool in_interval(int v, int x, int y) const {
        return g_.dist_ticks(x, v) + g_.dist_ticks(v, y) == g_.dist_ticks(x, y);
    }
    std::vector<int> interval(int x, int y) const;

    /// The unique interval-intersection vertex of the triple.
    int median(int x, int y, int z) const;

    const std::vector<Hyperplane>& hyperplanes() const;
    /// (dimension, exact flag). Exact clique search up to the threshold,
    /// greedy lower bound beyond.
    std::pair<int, bool> dimension(int exact_threshold = 20) const;
    void set_known_dimension(int d);

    bool is_convex(const std::vector<int>& verts) const;
    ConvexSubgraph convex_subgraph(std::vector<int> verts) const;

    HullResult convex_hull(const std::vector<int>& seed) const;

    /// Unique nearest vertex of C; the gate identity is asserted exactly.
    int gate(const ConvexSubgraph& c, int x) const;

    QuotientResult delete_hyperplanes(const std::vector<int>& hyperplane_ids,
                                      const ScanPolicy& pol = {}) const;

    struct HellyOutcome {
        bool all_intersect = false;
        int common_vertex = -1;
        std::pair<int, int> disjoint_pair{-1, -1};
    };
    HellyOutcome helly_check(const std::vector<ConvexSubgraph>& family) const;

    struct ClosureResult {
        std::vector<int> vertices;
        bool connected = false;
    };
    ClosureResult median_closure(const std::vector<int>& seed, size_t vertex_cap = 100000) const;

    /// Exact structural checks on the computed hyperplanes (partition,
    /// half-space convexity up to the scan policy, deletion-disconnection).
    void validate_hyperplanes(const ScanPolicy& pol = {}) const;

  private:
    explicit MedianGraph(GraphSpace g) : g_(std::move(g)) {}
    GraphSpace g_;
    mutable std::optional<std::vector<Hyperplane>> hyps_;
    mutable std::optional<std::pair<int, bool>> dim_;
};

struct MedianVerifyResult {
    std::optional<MedianGraph> graph;
    std::array<int, 3> counterexample{-1, -1, -1};
    int witness_count = -1; // interval-intersection size at the counterexample
    bool ok() const { return graph.has_value(); }
};

struct QuotientResult {
    MedianGraph graph;
    PointMap quotient; // original vertex -> quotient vertex
};

/// Cartesian product of unit-length trees with the componentwise median.
struct BoxProduct {
    MedianGraph graph;
    std::vector<GraphSpace> factors;
    std::vector<int> strides;
    int encode(const std::vector<int>& coords) const;
    std::vector<int> decode(int v) const;
    int median(int a, int b, int c) const; // componentwise, equals graph.median
};

BoxProduct box_product(std::vector<GraphSpace> trees, size_t vertex_cap = 3000,
                       const ScanPolicy& pol = {});

/// Exact tree median by interval scan; independent of MedianGraph.
int tree_median(const GraphSpace& tree, int x, int y, int z);

} // namespace cmg
