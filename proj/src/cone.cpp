#include "cmg/cone.hpp"

#include <algorithm>
#include <numeric>

#include "cmg/errors.hpp"

namespace cmg {

FiniteMetricSpace rescale(const FiniteMetricSpace& m) {
    if (m.n() == 0) throw StructuralError("rescale: empty space");
    Rational diam = m.diameter();
    if (diam.is_zero()) return m;
    Rational target(1, 2);
    if (diam == target) return m;
    Rational factor = target / diam;
    FiniteMetricSpace out = m;
    for (auto& d : out.dist) d *= factor;
    for (auto& c : out.coords)
        for (auto& x : c) x *= factor;
    out.scale = m.scale * factor;
    return out;
}

VertexBits NetHierarchy::open_ball(int point, const Rational& radius) const {
    VertexBits b(base.n());
    for (int z = 0; z < base.n(); ++z)
        if (base.d(point, z) < radius) b.set(z);
    return b;
}

VertexBits NetHierarchy::closed_ball(int point, const Rational& radius) const {
    VertexBits b(base.n());
    for (int z = 0; z < base.n(); ++z)
        if (base.d(point, z) <= radius) b.set(z);
    return b;
}

NetHierarchy build_nets(const FiniteMetricSpace& m, const Rational& r, int k_max, std::uint64_t seed) {
    if (m.n() == 0) throw StructuralError("build_nets: empty base");
    if (!(r > Rational(0)) || r > Rational(1, 6))
        throw ParameterError("build_nets: r must lie in (0, 1/6]");
    if (!(m.diameter() < Rational(1))) throw ParameterError("build_nets: base diameter must be < 1");
    if (k_max < 0) throw ParameterError("build_nets: negative k_max");

    NetHierarchy nets;
    nets.base = m;
    nets.r = r;
    nets.k_max = k_max;
    nets.seed = seed;

    std::vector<int> order(m.n());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    for (int k = 0; k <= k_max; ++k) {
        Rational sep = r.pow(k);
        std::vector<int> level;
        for (int p : order) {
            bool far = true;
            for (int q : level)
                if (m.d(p, q) < sep) { far = false; break; }
            if (far) level.push_back(p);
        }
        // exact invariants: separation, maximality, and a single apex at level 0
        for (size_t i = 0; i < level.size(); ++i)
            for (size_t j = i + 1; j < level.size(); ++j)
                if (m.d(level[i], level[j]) < sep)
                    throw BuildError("build_nets: separation violated at level " + std::to_string(k));
        for (int z = 0; z < m.n(); ++z) {
            bool covered = false;
            for (int q : level)
                if (m.d(z, q) < sep) { covered = true; break; }
            if (!covered) throw BuildError("build_nets: maximality violated at level " + std::to_string(k));
        }
        nets.levels.push_back(std::move(level));
    }
    if (nets.levels[0].size() != 1) throw BuildError("build_nets: level 0 is not a single apex");
    return nets;
}

int ConeGraph::vertex_at(int lvl, int point) const {
    for (int v = 0; v < g.n(); ++v)
        if (level[v] == lvl && base_point[v] == point) return v;
    return -1;
}

ConeGraph build_cone(const NetHierarchy& nets) {
    const auto& m = nets.base;
    int k_max = nets.k_max;

    ConeGraph cone;
    cone.k_max = k_max;
    std::vector<std::vector<int>> vid(k_max + 1);
    std::vector<std::string> labels;
    for (int k = 0; k <= k_max; ++k) {
        vid[k].resize(nets.levels[k].size());
        for (size_t i = 0; i < nets.levels[k].size(); ++i) {
            vid[k][i] = (int)cone.level.size();
            cone.level.push_back(k);
            cone.base_point.push_back(nets.levels[k][i]);
            labels.push_back("L" + std::to_string(k) + ":" + m.points[nets.levels[k][i]]);
        }
    }
    cone.apex = vid[0][0];

    std::vector<GraphEdge> edges;
    // per level: open balls for the nesting rule, closed for the intersection rule
    std::vector<std::vector<VertexBits>> open_b(k_max + 1), closed_b(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        Rational rad = nets.ball_radius(k);
        for (int p : nets.levels[k]) {
            open_b[k].push_back(nets.open_ball(p, rad));
            closed_b[k].push_back(nets.closed_ball(p, rad));
        }
    }
    for (int k = 0; k <= k_max; ++k) {
        for (size_t i = 0; i < nets.levels[k].size(); ++i)
            for (size_t j = i + 1; j < nets.levels[k].size(); ++j)
                if (closed_b[k][i].intersects(closed_b[k][j]))
                    edges.push_back({vid[k][i], vid[k][j], Rational(1)});
        if (k + 1 <= k_max) {
            for (size_t j = 0; j < nets.levels[k + 1].size(); ++j)
                for (size_t i = 0; i < nets.levels[k].size(); ++i)
                    if (open_b[k + 1][j].is_subset_of(open_b[k][i]))
                        edges.push_back({vid[k][i], vid[k + 1][j], Rational(1)});
        }
    }

    cone.g = GraphSpace((int)cone.level.size(), std::move(edges), std::move(labels));

    // the netting argument: every vertex above the apex level has a neighbour
    // one level down, so monotone paths reach the apex
    for (int v = 0; v < cone.g.n(); ++v) {
        if (cone.level[v] == 0) continue;
        bool has_parent = false;
        for (auto [u, e] : cone.g.neighbors(v))
            if (cone.level[u] == cone.level[v] - 1) { has_parent = true; break; }
        if (!has_parent)
            throw BuildError("build_cone: vertex " + cone.g.label(v) + " has no lower-level neighbour");
    }
    if (m.n() == 1) {
        // one-point base gives a ray
        if (cone.g.n() != k_max + 1 || (int)cone.g.edges().size() != k_max)
            throw BuildError("build_cone: one-point base did not produce a path");
    }
    return cone;
}

TreeBoundaryInstance tree_boundary_instance(int depth, int branching, const Rational& r,
                                            std::uint64_t seed, int k_max,
                                            const Rational& distance_ratio, size_t leaf_cap) {
    if (depth < 0 || branching < 1) throw ParameterError("tree_boundary_instance: bad shape");
    size_t leaves = 1;
    for (int d = 0; d < depth; ++d) {
        leaves *= (size_t)branching;
        if (leaves > leaf_cap) throw ResourceError("tree_boundary_instance: leaf cap exceeded");
    }
    Rational ratio = distance_ratio.is_zero() ? r : distance_ratio;
    if (k_max < 0) k_max = depth;

    TreeBoundaryInstance inst;

    // complete b-ary tree, vertices in breadth-first order
    std::vector<GraphEdge> edges;
    int level_begin = 0, level_end = 1;
    int next = 1;
    inst.depth_of.push_back(0);
    for (int d = 0; d < depth; ++d) {
        for (int p = level_begin; p < level_end; ++p)
            for (int c = 0; c < branching; ++c) {
                edges.push_back({p, next, Rational(1)});
                inst.depth_of.push_back(d + 1);
                ++next;
            }
        level_begin = level_end;
        level_end = next;
    }
    inst.tree = GraphSpace(next, std::move(edges));
    for (int v = 0; v < inst.tree.n(); ++v)
        if (inst.depth_of[v] == depth) inst.leaf_vertex.push_back(v);

    // leaf ultrametric: distance (1/2) * ratio^(common prefix length)
    int nl = (int)inst.leaf_vertex.size();
    FiniteMetricSpace z;
    for (int i = 0; i < nl; ++i) z.points.push_back("z" + std::to_string(i));
    z.dist.assign((size_t)nl * nl, Rational(0));
    auto prefix_len = [&](int i, int j) {
        int len = depth;
        int a = i, b = j;
        while (a != b) {
            a /= branching;
            b /= branching;
            --len;
        }
        return len;
    };
    for (int i = 0; i < nl; ++i)
        for (int j = i + 1; j < nl; ++j) {
            Rational d = Rational(1, 2) * ratio.pow(prefix_len(i, j));
            z.d(i, j) = d;
            z.d(j, i) = d;
        }
    inst.boundary = nl > 1 ? rescale(z) : z;

    inst.nets = build_nets(inst.boundary, r, k_max, seed);
    inst.cone = build_cone(inst.nets);

    // tree vertex at depth j corresponds to the level-min(j,k_max) net point
    // nearest to its leftmost descendant leaf
    inst.correspondence.source_size = inst.tree.n();
    inst.correspondence.target_size = inst.cone.g.n();
    inst.correspondence.assignment.assign(inst.tree.n(), -1);
    std::vector<int> leftmost(inst.tree.n(), -1);
    for (int li = 0; li < nl; ++li) leftmost[inst.leaf_vertex[li]] = li;
    for (int v = inst.tree.n() - 1; v >= 0; --v) {
        if (leftmost[v] >= 0) continue;
        for (auto [u, e] : inst.tree.neighbors(v))
            if (inst.depth_of[u] == inst.depth_of[v] + 1 && leftmost[u] >= 0) {
                if (leftmost[v] < 0 || leftmost[u] < leftmost[v]) leftmost[v] = leftmost[u];
            }
    }
    for (int v = 0; v < inst.tree.n(); ++v) {
        int lvl = std::min(inst.depth_of[v], k_max);
        int anchor = leftmost[v];
        int best = -1;
        Rational bd(0);
        for (int p : inst.nets.levels[lvl]) {
            Rational d = inst.boundary.d(p, anchor);
            if (best < 0 || d < bd) {
                best = p;
                bd = d;
            }
        }
        inst.correspondence.assignment[v] = inst.cone.vertex_at(lvl, best);
    }

    if (inst.tree.n() > 1) {
        auto pairs = pair_sample(inst.tree.n(), 40000, seed ^ 0x77, 4000);
        inst.distortion = distortion(
            inst.correspondence, pairs, [&](int a, int b) { return inst.tree.dist(a, b); },
            [&](int a, int b) { return inst.cone.g.dist(a, b); });
        // how far the image is from covering the cone
        std::int64_t onto = 0;
        for (int w = 0; w < inst.cone.g.n(); ++w) {
            std::int64_t best = -1;
            for (int v = 0; v < inst.tree.n(); ++v) {
                std::int64_t d = inst.cone.g.dist_ticks(w, inst.correspondence(v));
                if (best < 0 || d < best) best = d;
            }
            onto = std::max(onto, best);
        }
        inst.distortion.coarse_onto_radius = Rational(onto, inst.cone.g.tick_den());
    }
    return inst;
}

} // namespace cmg
