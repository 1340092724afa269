#include "cmg/cover_trees.hpp"

#include <algorithm>
#include <set>

#include "cmg/coarse_median.hpp"
#include "cmg/errors.hpp"

namespace cmg {

int TreeFactor::lca(int a, int b) const {
    while (a != b) {
        if (depth[a] >= depth[b])
            a = parent[a];
        else
            b = parent[b];
    }
    return a;
}

int TreeFactor::dist(int a, int b) const {
    int l = lca(a, b);
    return depth[a] + depth[b] - 2 * depth[l];
}

bool TreeFactor::is_ancestor_or_self(int a, int b) const {
    while (depth[b] > depth[a]) b = parent[b];
    return a == b;
}

int TreeFactor::median(int a, int b, int c) const {
    int ab = lca(a, b), ac = lca(a, c), bc = lca(b, c);
    int m = ab;
    if (depth[ac] > depth[m]) m = ac;
    if (depth[bc] > depth[m]) m = bc;
    return m;
}

std::vector<int> TreeFactor::hull(const std::vector<int>& s) const {
    if (s.empty()) throw StructuralError("tree hull: empty set");
    std::set<int> out;
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i; j < s.size(); ++j) {
            int a = s[i], b = s[j], l = lca(a, b);
            for (int v = a;; v = parent[v]) {
                out.insert(v);
                if (v == l) break;
            }
            for (int v = b;; v = parent[v]) {
                out.insert(v);
                if (v == l) break;
            }
        }
    return {out.begin(), out.end()};
}

int TreeFactor::gate(const std::vector<int>& s, int a) const {
    int best = -1, bd = 0;
    for (int v : s) {
        int d = dist(a, v);
        if (best < 0 || d < bd || (d == bd && v < best)) {
            best = v;
            bd = d;
        }
    }
    return best;
}

RootedForest build_trees(const ColouredCoverSequence& covers) {
    RootedForest forest;
    forest.num_colours = covers.num_colours;
    forest.trees.resize(covers.num_colours);
    forest.node_element.resize(covers.num_colours);
    forest.element_node.assign(covers.elements.size(), -1);

    for (int c = 0; c < covers.num_colours; ++c) {
        auto& tf = forest.trees[c];
        auto& ne = forest.node_element[c];
        // nodes in level order so parents precede children
        for (int k = 0; k <= covers.k_max; ++k)
            for (int e : covers.by_colour_level[c][k]) {
                forest.element_node[e] = (int)ne.size();
                ne.push_back(e);
            }
        tf.parent.assign(ne.size(), -1);
        tf.depth.assign(ne.size(), 0);
        for (size_t i = 0; i < ne.size(); ++i) {
            const auto& el = covers.elements[ne[i]];
            if (el.level == 0) continue;
            // parent: containing same-colour element of maximal level below ours
            int pick = -1;
            for (int k = el.level - 1; k >= 0 && pick < 0; --k) {
                for (int e : covers.by_colour_level[c][k])
                    if (el.bits.is_subset_of(covers.elements[e].bits)) {
                        if (pick >= 0)
                            throw BuildError("build_trees: two containers at one level (not laminar)");
                        pick = e;
                    }
            }
            if (pick < 0) throw BuildError("build_trees: element has no container");
            tf.parent[i] = forest.element_node[pick];
            tf.depth[i] = tf.depth[tf.parent[i]] + 1;
            if (covers.elements[pick].level >= el.level)
                throw BuildError("build_trees: parent level does not decrease");
        }
        // a rooted parent array with exactly one root is a tree
        int roots = 0;
        for (int p : tf.parent)
            if (p < 0) ++roots;
        if (roots != 1) throw BuildError("build_trees: colour " + std::to_string(c) + " is not a tree");
    }
    return forest;
}

ConeTreeMap map_fc(const ConeGraph& cone, const ColouredCoverSequence& covers,
                   const RootedForest& forest, int colour) {
    // share the nets' realized balls: recompute from the covers' base
    const auto& m = covers.base;
    ConeTreeMap fc;
    fc.colour = colour;
    fc.node_of.assign(cone.g.n(), -1);
    for (int v = 0; v < cone.g.n(); ++v) {
        int k = cone.level[v];
        if (k == 0) {
            fc.node_of[v] = 0;
            continue;
        }
        VertexBits ball(m.n());
        Rational rad = Rational(2) * covers.r.pow(k);
        for (int z = 0; z < m.n(); ++z)
            if (m.d(cone.base_point[v], z) < rad) ball.set(z);
        int pick = -1;
        for (int lev = std::min(k - 1, covers.k_max); lev >= 0 && pick < 0; --lev)
            for (int e : covers.by_colour_level[colour][lev])
                if (ball.is_subset_of(covers.elements[e].bits)) {
                    pick = e;
                    break;
                }
        if (pick < 0) throw BuildError("map_fc: no containing element (level 0 should always work)");
        fc.node_of[v] = forest.element_node[pick];
    }
    // the factor maps are 2-Lipschitz on every cone edge
    const auto& tf = forest.trees[colour];
    for (const auto& e : cone.g.edges()) {
        if (tf.dist(fc.node_of[e.u], fc.node_of[e.v]) > 2)
            throw BuildError("map_fc: 2-Lipschitz fails on cone edge " + cone.g.label(e.u) + " -- " +
                             cone.g.label(e.v));
    }
    return fc;
}

UhatReport uhat(const ColouredCoverSequence& covers, const NetHierarchy& nets, const ConeGraph& cone,
                const RootedForest& forest, const ConeTreeMap& fc, int element_id) {
    const auto& el = covers.elements[element_id];
    if (el.colour != fc.colour) throw StructuralError("uhat: element colour does not match the map");
    int k = el.level;
    UhatReport rep;
    if (k > nets.k_max) throw StructuralError("uhat: element level beyond the net hierarchy");
    for (int p : nets.levels[k]) {
        VertexBits ball = nets.open_ball(p, nets.ball_radius(k));
        if (ball.intersects(el.bits)) rep.members.push_back(p);
    }
    rep.nonempty = !rep.members.empty();
    rep.cone_diameter = 0;
    for (size_t i = 0; i < rep.members.size(); ++i)
        for (size_t j = i + 1; j < rep.members.size(); ++j) {
            int vi = cone.vertex_at(k, rep.members[i]);
            int vj = cone.vertex_at(k, rep.members[j]);
            rep.cone_diameter = std::max(rep.cone_diameter, cone.g.dist_ticks(vi, vj));
        }
    rep.diameter_ok = rep.cone_diameter <= 2;

    const auto& tf = forest.trees[fc.colour];
    int un = forest.element_node[element_id];
    for (int p : rep.members) {
        int v = cone.vertex_at(k, p);
        int fn = fc.node_of[v];
        if (!tf.is_ancestor_or_self(fn, un)) rep.images_on_root_path = false;
        if (tf.dist(fn, un) > 2) rep.images_within_two = false;
    }
    return rep;
}

std::int64_t TreeProduct::encode(const std::vector<int>& coords) const {
    std::int64_t v = 0;
    for (size_t f = 0; f < factors.size(); ++f) v += coords[f] * strides[f];
    return v;
}

std::vector<int> TreeProduct::decode(std::int64_t v) const {
    std::vector<int> c(factors.size());
    for (size_t f = 0; f < factors.size(); ++f) c[f] = (int)((v / strides[f]) % factors[f].n());
    return c;
}

std::int64_t TreeProduct::dist(std::int64_t a, std::int64_t b) const {
    std::int64_t d = 0;
    for (size_t f = 0; f < factors.size(); ++f) {
        int ca = (int)((a / strides[f]) % factors[f].n());
        int cb = (int)((b / strides[f]) % factors[f].n());
        d += factors[f].dist(ca, cb);
    }
    return d;
}

std::int64_t TreeProduct::median(std::int64_t a, std::int64_t b, std::int64_t c) const {
    std::int64_t m = 0;
    for (size_t f = 0; f < factors.size(); ++f) {
        int ca = (int)((a / strides[f]) % factors[f].n());
        int cb = (int)((b / strides[f]) % factors[f].n());
        int cc = (int)((c / strides[f]) % factors[f].n());
        m += (std::int64_t)factors[f].median(ca, cb, cc) * strides[f];
    }
    return m;
}

EmbedResult embed_product(const ConeGraph& cone, const RootedForest& forest,
                          const std::vector<ConeTreeMap>& maps, size_t pair_cap, size_t triple_cap,
                          std::uint64_t seed) {
    if ((int)maps.size() != forest.num_colours)
        throw StructuralError("embed_product: need one map per colour");
    EmbedResult res;
    res.product.factors = forest.trees;
    res.product.strides.resize(forest.trees.size());
    std::int64_t s = 1;
    for (size_t f = 0; f < forest.trees.size(); ++f) {
        res.product.strides[f] = s;
        if (s > (std::int64_t)1e15 / std::max(1, forest.trees[f].n()))
            throw ResourceError("embed_product: product of trees too large to index");
        s *= forest.trees[f].n();
    }
    res.product.size = s;

    res.image.assign(cone.g.n(), 0);
    for (int v = 0; v < cone.g.n(); ++v) {
        std::vector<int> coords(forest.num_colours);
        for (int c = 0; c < forest.num_colours; ++c) coords[c] = maps[c].node_of[v];
        res.image[v] = res.product.encode(coords);
    }

    auto pairs = pair_sample(cone.g.n(), pair_cap, seed, 20000);
    if (!pairs.empty()) {
        PointMap ident;
        ident.source_size = cone.g.n();
        ident.target_size = cone.g.n();
        ident.assignment.resize(cone.g.n());
        for (int v = 0; v < cone.g.n(); ++v) ident.assignment[v] = v;
        res.qi = distortion(
            ident, pairs, [&](int a, int b) { return cone.g.dist(a, b); },
            [&](int a, int b) { return Rational(res.product.dist(res.image[a], res.image[b])); });
    }

    auto triples = triple_sample(cone.g.n(), triple_cap, seed ^ 0xabc, 30000);
    res.triples_scanned = triples.size();
    for (auto& t : triples) {
        int m = coarse_median(cone.g, t[0], t[1], t[2]);
        std::int64_t pm3 = res.product.median(res.image[t[0]], res.image[t[1]], res.image[t[2]]);
        Rational d{res.product.dist(res.image[m], pm3)};
        if (d > res.qm_defect) res.qm_defect = d;
    }
    return res;
}

bool check_monotone_images(const ConeGraph& cone, const RootedForest& forest, const ConeTreeMap& fc,
                           std::string* witness) {
    const auto& tf = forest.trees[fc.colour];
    for (int start = 0; start < cone.g.n(); ++start) {
        std::vector<int> chain{fc.node_of[start]};
        int cur = start;
        while (cone.level[cur] > 0) {
            int next = -1;
            for (auto [u, e] : cone.g.neighbors(cur))
                if (cone.level[u] == cone.level[cur] - 1 && (next < 0 || u < next)) next = u;
            if (next < 0) return false;
            cur = next;
            chain.push_back(fc.node_of[cur]);
        }
        for (size_t i = 0; i < chain.size(); ++i)
            for (size_t j = i + 1; j < chain.size(); ++j)
                if (!tf.is_ancestor_or_self(chain[j], chain[i]) &&
                    !tf.is_ancestor_or_self(chain[i], chain[j])) {
                    if (witness)
                        *witness = "images of the descending path from " + cone.g.label(start) +
                                   " are not ancestry-comparable";
                    return false;
                }
    }
    return true;
}

} // namespace cmg
