#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmg/cone.hpp"
#include "cmg/covers.hpp"
#include "cmg/maps.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Rooted tree metric from a parent array (root has parent -1).
struct TreeFactor {
    std::vector<int> parent;
    std::vector<int> depth;
    int n() const { return (int)parent.size(); }
    int lca(int a, int b) const;
    int dist(int a, int b) const;
    bool is_ancestor_or_self(int a, int b) const; // a on the root path of b
    int median(int a, int b, int c) const;        // deepest pairwise lca
    /// Union of pairwise paths (the convex hull in a tree), sorted.
    std::vector<int> hull(const std::vector<int>& s) const;
    /// Nearest vertex of the subtree `s` (must be connected) from a.
    int gate(const std::vector<int>& s, int a) const;
};

/// One containment tree T_c per colour; node i of colour c is an element of
/// the cover sequence. Node 0 is the root (the whole base at level 0).
struct RootedForest {
    int num_colours = 0;
    std::vector<TreeFactor> trees;
    std::vector<std::vector<int>> node_element; // [colour][node] -> element id
    std::vector<int> element_node;              // element id -> node id in its colour tree
};

RootedForest build_trees(const ColouredCoverSequence& covers);

/// Evaluated f_c on cone vertices: each vertex maps to the deepest same-colour
/// element below its own level that contains its ball.
struct ConeTreeMap {
    int colour = 0;
    std::vector<int> node_of; // cone vertex -> forest node
};

ConeTreeMap map_fc(const ConeGraph& cone, const ColouredCoverSequence& covers,
                   const RootedForest& forest, int colour);

struct UhatReport {
    std::vector<int> members; // net points of the element's level whose balls meet it
    bool nonempty = false;
    std::int64_t cone_diameter = 0;
    bool diameter_ok = false;
    bool images_on_root_path = true;  // f_c(v) is an ancestor-or-self of U
    bool images_within_two = true;    // tree distance to U at most 2
};

UhatReport uhat(const ColouredCoverSequence& covers, const NetHierarchy& nets, const ConeGraph& cone,
                const RootedForest& forest, const ConeTreeMap& fc, int element_id);

/// l1 product of the colour trees; vertices are int64 codes.
struct TreeProduct {
    std::vector<TreeFactor> factors;
    std::vector<std::int64_t> strides;
    std::int64_t size = 1;

    std::int64_t encode(const std::vector<int>& coords) const;
    std::vector<int> decode(std::int64_t v) const;
    std::int64_t dist(std::int64_t a, std::int64_t b) const;
    std::int64_t median(std::int64_t a, std::int64_t b, std::int64_t c) const;
};

struct EmbedResult {
    TreeProduct product;
    std::vector<std::int64_t> image; // cone vertex -> product code
    QIReport qi;
    Rational qm_defect{0};
    size_t triples_scanned = 0;
};

/// The combined map (f_c)_c into the product of the colour trees, with its
/// measured distortion and quasimedian defect (exhaustive under the caps,
/// seeded samples beyond).
EmbedResult embed_product(const ConeGraph& cone, const RootedForest& forest,
                          const std::vector<ConeTreeMap>& maps, size_t pair_cap = 200000,
                          size_t triple_cap = 400000, std::uint64_t seed = 0x90deULL);

/// Along level-monotone cone paths toward the apex the f_c images must form
/// an ancestry chain; returns false with a witness description otherwise.
bool check_monotone_images(const ConeGraph& cone, const RootedForest& forest, const ConeTreeMap& fc,
                           std::string* witness = nullptr);

} // namespace cmg
