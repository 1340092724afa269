#include "cmg/median_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

#include "cmg/errors.hpp"

namespace cmg {

int VertexBits::count() const {
    int c = 0;
    for (auto x : w) c += __builtin_popcountll(x);
    return c;
}

bool VertexBits::intersects(const VertexBits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
        if (w[i] & o.w[i]) return true;
    return false;
}

bool VertexBits::is_subset_of(const VertexBits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
        if (w[i] & ~o.w[i]) return false;
    return true;
}

std::vector<int> VertexBits::to_vector() const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

static bool is_bipartite(const GraphSpace& g) {
    std::vector<int> col(g.n(), -1);
    std::deque<int> q{0};
    col[0] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (auto [v, e] : g.neighbors(u)) {
            if (col[v] < 0) {
                col[v] = col[u] ^ 1;
                q.push_back(v);
            } else if (col[v] == col[u]) {
                return false;
            }
        }
    }
    return true;
}

MedianVerifyResult MedianGraph::verify(GraphSpace g, const ScanPolicy& pol) {
    if (!g.unit_lengths()) throw StructuralError("median graph: edges must have unit length");
    MedianVerifyResult res;
    bool bip = is_bipartite(g);
    g.ensure_metric();
    MedianGraph q(std::move(g));
    int n = q.n();
    auto count_triple = [&](int x, int y, int z, int& witness) {
        int c = 0;
        witness = -1;
        for (int v = 0; v < n; ++v)
            if (q.in_interval(v, x, y) && q.in_interval(v, y, z) && q.in_interval(v, x, z)) {
                ++c;
                witness = v;
            }
        return c;
    };
    size_t total = n >= 3 ? (size_t)n * (n - 1) * (n - 2) / 6 : 0;
    int w;
    if (total <= pol.exhaustive_cap) {
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y)
                for (int z = y + 1; z < n; ++z)
                    if (count_triple(x, y, z, w) != 1) {
                        res.counterexample = {x, y, z};
                        res.witness_count = count_triple(x, y, z, w);
                        return res;
                    }
    } else {
        Rng rng(pol.seed);
        for (size_t s = 0; s < pol.sample; ++s) {
            int x = (int)rng.below(n), y = (int)rng.below(n), z = (int)rng.below(n);
            if (count_triple(x, y, z, w) != 1) {
                res.counterexample = {x, y, z};
                res.witness_count = count_triple(x, y, z, w);
                return res;
            }
        }
    }
    if (!bip) {
        res.counterexample = {0, 0, 0};
        res.witness_count = -2;
        return res;
    }
    res.graph = std::move(q);
    return res;
}

std::vector<int> MedianGraph::interval(int x, int y) const {
    std::vector<int> out;
    for (int v = 0; v < n(); ++v)
        if (in_interval(v, x, y)) out.push_back(v);
    return out;
}

int MedianGraph::median(int x, int y, int z) const {
    for (int v = 0; v < n(); ++v)
        if (in_interval(v, x, y) && in_interval(v, y, z) && in_interval(v, x, z)) return v;
    throw StructuralError("median: no interval-intersection vertex (graph is not median)");
}

const std::vector<Hyperplane>& MedianGraph::hyperplanes() const {
    if (hyps_) return *hyps_;
    int nn = n();
    std::map<std::vector<std::uint64_t>, int> classes;
    std::vector<Hyperplane> hs;
    for (int e = 0; e < (int)g_.edges().size(); ++e) {
        int u = g_.edges()[e].u, v = g_.edges()[e].v;
        VertexBits wa(nn), wb(nn);
        for (int x = 0; x < nn; ++x) {
            if (g_.dist_ticks(x, u) < g_.dist_ticks(x, v))
                wa.set(x);
            else
                wb.set(x);
        }
        if (!wa.test(0)) std::swap(wa, wb);
        auto it = classes.find(wa.w);
        if (it == classes.end()) {
            classes.emplace(wa.w, (int)hs.size());
            Hyperplane h;
            h.side_a = wa;
            h.side_b = wb;
            h.edge_ids.push_back(e);
            hs.push_back(std::move(h));
        } else {
            hs[it->second].edge_ids.push_back(e);
        }
    }
    hyps_ = std::move(hs);
    return *hyps_;
}

static bool hyperplanes_cross(const Hyperplane& a, const Hyperplane& b) {
    return a.side_a.intersects(b.side_a) && a.side_a.intersects(b.side_b) &&
           a.side_b.intersects(b.side_a) && a.side_b.intersects(b.side_b);
}

static void max_clique_rec(const std::vector<std::vector<char>>& adj, std::vector<int>& cand,
                           int cur, int& best) {
    if (cur + (int)cand.size() <= best) return;
    if (cand.empty()) {
        best = std::max(best, cur);
        return;
    }
    while (!cand.empty()) {
        if (cur + (int)cand.size() <= best) return;
        int v = cand.back();
        cand.pop_back();
        std::vector<int> next;
        for (int u : cand)
            if (adj[v][u]) next.push_back(u);
        max_clique_rec(adj, next, cur + 1, best);
    }
}

std::pair<int, bool> MedianGraph::dimension(int exact_threshold) const {
    if (dim_) return *dim_;
    const auto& hs = hyperplanes();
    int m = (int)hs.size();
    if (m == 0) {
        dim_ = {0, true};
        return *dim_;
    }
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            adj[i][j] = adj[j][i] = hyperplanes_cross(hs[i], hs[j]) ? 1 : 0;
    if (m <= exact_threshold) {
        std::vector<int> cand(m);
        std::iota(cand.begin(), cand.end(), 0);
        int best = 0;
        max_clique_rec(adj, cand, 0, best);
        dim_ = {best, true};
    } else {
        int best = 0;
        for (int start = 0; start < m; ++start) {
            std::vector<int> clique{start};
            for (int cand = 0; cand < m; ++cand) {
                if (cand == start) continue;
                bool ok = true;
                for (int c : clique)
                    if (!adj[c][cand]) { ok = false; break; }
                if (ok) clique.push_back(cand);
            }
            best = std::max(best, (int)clique.size());
        }
        dim_ = {best, false};
    }
    return *dim_;
}

void MedianGraph::set_known_dimension(int d) { dim_ = {d, true}; }

bool MedianGraph::is_convex(const std::vector<int>& verts) const {
    VertexBits in(n());
    for (int v : verts) in.set(v);
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            for (int v = 0; v < n(); ++v)
                if (!in.test(v) && in_interval(v, verts[i], verts[j])) return false;
    return true;
}

ConvexSubgraph MedianGraph::convex_subgraph(std::vector<int> verts) const {
    if (verts.empty()) throw StructuralError("convex subgraph: empty vertex set");
    if (!is_convex(verts)) throw StructuralError("convex subgraph: vertex set is not convex");
    std::sort(verts.begin(), verts.end());
    return ConvexSubgraph{this, std::move(verts)};
}

HullResult MedianGraph::convex_hull(const std::vector<int>& seed) const {
    if (seed.empty()) throw StructuralError("convex_hull: empty seed set");
    // one pass of mu(Q^0, Y, Y) equals one pass of pairwise interval closure
    VertexBits in(n());
    std::vector<int> cur;
    for (int v : seed)
        if (!in.test(v)) {
            in.set(v);
            cur.push_back(v);
        }
    HullResult res;
    while (true) {
        std::vector<int> added;
        for (size_t i = 0; i < cur.size(); ++i)
            for (size_t j = i + 1; j < cur.size(); ++j)
                for (int v = 0; v < n(); ++v)
                    if (!in.test(v) && in_interval(v, cur[i], cur[j])) {
                        in.set(v);
                        added.push_back(v);
                    }
        if (added.empty()) break;
        ++res.iterations;
        cur.insert(cur.end(), added.begin(), added.end());
    }
    std::sort(cur.begin(), cur.end());
    res.vertices = std::move(cur);
    // the fixpoint must arrive within dim(q) rounds; only enforced when the
    // crossing-clique dimension is exact, a greedy value is just a lower bound
    auto [dim, exact] = dimension();
    if (exact && res.iterations > std::max(dim, 1))
        throw BuildError("convex_hull: took " + std::to_string(res.iterations) +
                         " iterations on a dimension-" + std::to_string(dim) + " graph");
    return res;
}

int MedianGraph::gate(const ConvexSubgraph& c, int x) const {
    if (c.parent != this) throw StructuralError("gate: subgraph belongs to another graph");
    if (c.vertices.empty()) throw StructuralError("gate: empty set");
    int best = -1;
    std::int64_t bd = -1;
    for (int v : c.vertices) {
        std::int64_t d = g_.dist_ticks(x, v);
        if (bd < 0 || d < bd || (d == bd && v < best)) {
            bd = d;
            best = v;
        }
    }
    for (int v : c.vertices)
        if (g_.dist_ticks(x, v) != g_.dist_ticks(x, best) + g_.dist_ticks(best, v))
            throw BuildError("gate: identity failed at witness vertex " + std::to_string(v));
    return best;
}

QuotientResult MedianGraph::delete_hyperplanes(const std::vector<int>& hyperplane_ids,
                                               const ScanPolicy& pol) const {
    const auto& hs = hyperplanes();
    std::vector<char> deleted(hs.size(), 0);
    for (int h : hyperplane_ids) {
        if (h < 0 || h >= (int)hs.size()) throw StructuralError("delete_hyperplanes: bad id");
        deleted[h] = 1;
    }
    std::vector<int> kept;
    for (int h = 0; h < (int)hs.size(); ++h)
        if (!deleted[h]) kept.push_back(h);

    // signature over kept hyperplanes
    int nn = n();
    size_t words = (kept.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> sig(nn, std::vector<std::uint64_t>(words, 0));
    for (size_t ki = 0; ki < kept.size(); ++ki) {
        const auto& h = hs[kept[ki]];
        for (int v = 0; v < nn; ++v)
            if (h.side_a.test(v)) sig[v][ki >> 6] |= 1ULL << (ki & 63);
    }
    std::map<std::vector<std::uint64_t>, int> classes;
    std::vector<int> cls(nn, -1);
    std::vector<int> rep;
    for (int v = 0; v < nn; ++v) {
        auto it = classes.find(sig[v]);
        if (it == classes.end()) {
            classes.emplace(sig[v], (int)rep.size());
            cls[v] = (int)rep.size();
            rep.push_back(v);
        } else {
            cls[v] = it->second;
        }
    }
    int m = (int)rep.size();
    auto hamming = [&](int a, int b) {
        std::int64_t h = 0;
        for (size_t i = 0; i < words; ++i) h += __builtin_popcountll(sig[rep[a]][i] ^ sig[rep[b]][i]);
        return h;
    };
    std::vector<GraphEdge> edges;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (hamming(a, b) == 1) edges.push_back({a, b, Rational(1)});
    std::vector<std::string> labels;
    for (int a = 0; a < m; ++a) labels.push_back("q" + std::to_string(a) + "<-" + g_.label(rep[a]));

    auto ver = MedianGraph::verify(GraphSpace(m, std::move(edges), std::move(labels)), pol);
    if (!ver.ok()) throw BuildError("delete_hyperplanes: quotient failed median verification");

    // quotient metric must be the kept-separator count; exact on small, sampled on large
    const MedianGraph& q = *ver.graph;
    auto check_pair = [&](int x, int y) {
        std::int64_t sep = 0;
        for (int h = 0; h < (int)hs.size(); ++h)
            if (deleted[h] && hs[h].separates(x, y)) ++sep;
        if (q.space().dist_ticks(cls[x], cls[y]) + sep != g_.dist_ticks(x, y))
            throw BuildError("delete_hyperplanes: distance drop mismatch at pair (" +
                             std::to_string(x) + "," + std::to_string(y) + ")");
    };
    size_t total = (size_t)nn * (nn - 1) / 2;
    if (total <= pol.exhaustive_cap) {
        for (int x = 0; x < nn; ++x)
            for (int y = x + 1; y < nn; ++y) check_pair(x, y);
    } else {
        Rng rng(pol.seed);
        for (size_t s = 0; s < pol.sample; ++s) check_pair((int)rng.below(nn), (int)rng.below(nn));
    }

    PointMap pm;
    pm.source_size = nn;
    pm.target_size = m;
    pm.assignment = cls;
    return QuotientResult{std::move(*ver.graph), std::move(pm)};
}

MedianGraph::HellyOutcome MedianGraph::helly_check(const std::vector<ConvexSubgraph>& family) const {
    if (family.empty()) throw StructuralError("helly_check: empty family");
    std::vector<VertexBits> bits;
    for (const auto& c : family) {
        VertexBits b(n());
        for (int v : c.vertices) b.set(v);
        bits.push_back(std::move(b));
    }
    HellyOutcome out;
    for (size_t i = 0; i < bits.size(); ++i)
        for (size_t j = i + 1; j < bits.size(); ++j)
            if (!bits[i].intersects(bits[j])) {
                out.disjoint_pair = {(int)i, (int)j};
                return out;
            }
    out.all_intersect = true;
    VertexBits acc = bits[0];
    for (size_t i = 1; i < bits.size(); ++i)
        for (size_t wd = 0; wd < acc.w.size(); ++wd) acc.w[wd] &= bits[i].w[wd];
    auto common = acc.to_vector();
    if (common.empty())
        throw BuildError("helly_check: pairwise-intersecting convex family has empty intersection");
    out.common_vertex = common.front();
    return out;
}

MedianGraph::ClosureResult MedianGraph::median_closure(const std::vector<int>& seed,
                                                       size_t vertex_cap) const {
    if (seed.empty()) throw StructuralError("median_closure: empty seed");
    VertexBits in(n());
    std::vector<int> mem;
    for (int v : seed)
        if (!in.test(v)) {
            in.set(v);
            mem.push_back(v);
        }
    // process each triple once: rounds cover the triples whose largest index is new
    size_t processed = 0; // prefix of mem already closed against itself
    while (processed < mem.size()) {
        size_t old = processed;
        size_t end = mem.size();
        processed = end;
        for (size_t c = old; c < end; ++c)
            for (size_t a = 0; a + 1 < c; ++a)
                for (size_t b = a + 1; b < c; ++b) {
                    int m = median(mem[a], mem[b], mem[c]);
                    if (!in.test(m)) {
                        in.set(m);
                        mem.push_back(m);
                        if (mem.size() > vertex_cap)
                            throw ResourceError("median_closure: vertex cap exceeded");
                    }
                }
    }
    std::sort(mem.begin(), mem.end());

    // closure fixpoint holds by construction; verify connectivity of the induced subgraph
    ClosureResult res;
    res.vertices = mem;
    VertexBits seen(n());
    std::deque<int> q{mem.front()};
    seen.set(mem.front());
    size_t cnt = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (auto [v, e] : g_.neighbors(u))
            if (in.test(v) && !seen.test(v)) {
                seen.set(v);
                ++cnt;
                q.push_back(v);
            }
    }
    res.connected = cnt == mem.size();
    return res;
}

void MedianGraph::validate_hyperplanes(const ScanPolicy& pol) const {
    const auto& hs = hyperplanes();
    int nn = n();
    for (size_t hi = 0; hi < hs.size(); ++hi) {
        const auto& h = hs[hi];
        for (int v = 0; v < nn; ++v)
            if (h.side_a.test(v) == h.side_b.test(v))
                throw BuildError("hyperplane " + std::to_string(hi) + ": sides do not partition");

        // deleting the class disconnects into exactly the two sides
        std::vector<char> removed(g_.edges().size(), 0);
        for (int e : h.edge_ids) removed[e] = 1;
        VertexBits seen(nn);
        std::deque<int> q{0};
        seen.set(0);
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (auto [v, e] : g_.neighbors(u))
                if (!removed[e] && !seen.test(v)) {
                    seen.set(v);
                    q.push_back(v);
                }
        }
        const VertexBits& start_side = h.side_a.test(0) ? h.side_a : h.side_b;
        if (!(seen == start_side))
            throw BuildError("hyperplane " + std::to_string(hi) +
                             ": deletion does not split into its half-spaces");

        // convexity of both sides, sampled beyond the policy cap
        for (const VertexBits* side : {&h.side_a, &h.side_b}) {
            auto verts = side->to_vector();
            size_t total = verts.size() * (verts.size() - 1) / 2;
            auto check = [&](int a, int b) {
                for (int v = 0; v < nn; ++v)
                    if (!side->test(v) && in_interval(v, a, b))
                        throw BuildError("hyperplane " + std::to_string(hi) +
                                         ": half-space not convex at (" + std::to_string(a) + "," +
                                         std::to_string(b) + ")");
            };
            if (total <= pol.exhaustive_cap / std::max<size_t>(1, hs.size())) {
                for (size_t i = 0; i < verts.size(); ++i)
                    for (size_t j = i + 1; j < verts.size(); ++j) check(verts[i], verts[j]);
            } else {
                Rng rng(pol.seed + hi);
                size_t k = pol.sample / std::max<size_t>(1, hs.size()) + 8;
                for (size_t s = 0; s < k; ++s) {
                    int a = verts[rng.below(verts.size())];
                    int b = verts[rng.below(verts.size())];
                    if (a != b) check(a, b);
                }
            }
        }
    }
}

int BoxProduct::encode(const std::vector<int>& coords) const {
    int v = 0;
    for (size_t f = 0; f < factors.size(); ++f) v += coords[f] * strides[f];
    return v;
}

std::vector<int> BoxProduct::decode(int v) const {
    std::vector<int> c(factors.size());
    for (size_t f = 0; f < factors.size(); ++f) {
        c[f] = (v / strides[f]) % factors[f].n();
    }
    return c;
}

int BoxProduct::median(int a, int b, int c) const {
    auto ca = decode(a), cb = decode(b), cc = decode(c);
    std::vector<int> cm(factors.size());
    for (size_t f = 0; f < factors.size(); ++f) cm[f] = tree_median(factors[f], ca[f], cb[f], cc[f]);
    return encode(cm);
}

int tree_median(const GraphSpace& tree, int x, int y, int z) {
    for (int v = 0; v < tree.n(); ++v) {
        if (tree.dist_ticks(x, v) + tree.dist_ticks(v, y) == tree.dist_ticks(x, y) &&
            tree.dist_ticks(y, v) + tree.dist_ticks(v, z) == tree.dist_ticks(y, z) &&
            tree.dist_ticks(x, v) + tree.dist_ticks(v, z) == tree.dist_ticks(x, z))
            return v;
    }
    throw StructuralError("tree_median: no median vertex (not a tree metric)");
}

BoxProduct box_product(std::vector<GraphSpace> trees, size_t vertex_cap, const ScanPolicy& pol) {
    if (trees.empty()) throw StructuralError("box_product: no factors");
    size_t total = 1;
    int dim = 0;
    for (const auto& t : trees) {
        if (!t.unit_lengths()) throw StructuralError("box_product: factors must have unit lengths");
        if (t.edges().size() + 1 != (size_t)t.n()) throw StructuralError("box_product: factor is not a tree");
        total *= (size_t)t.n();
        if (total > vertex_cap) throw ResourceError("box_product: vertex cap exceeded");
        if (!t.edges().empty()) ++dim;
    }

    std::vector<int> strides(trees.size());
    int s = 1;
    for (size_t f = 0; f < trees.size(); ++f) {
        strides[f] = s;
        s *= trees[f].n();
    }
    int nv = (int)total;
    std::vector<GraphEdge> edges;
    std::vector<std::string> labels(nv);
    for (int v = 0; v < nv; ++v) {
        std::string lab;
        for (size_t f = 0; f < trees.size(); ++f) {
            int cf = (v / strides[f]) % trees[f].n();
            lab += (f ? "|" : "") + trees[f].label(cf);
        }
        labels[v] = lab;
        for (size_t f = 0; f < trees.size(); ++f) {
            int cf = (v / strides[f]) % trees[f].n();
            for (auto [u, e] : trees[f].neighbors(cf))
                if (u > cf) edges.push_back({v, v + (u - cf) * strides[f], Rational(1)});
        }
    }
    auto ver = MedianGraph::verify(GraphSpace(nv, std::move(edges), std::move(labels)), pol);
    if (!ver.ok()) throw BuildError("box_product: product failed median verification");
    ver.graph->set_known_dimension(dim);
    BoxProduct bp{std::move(*ver.graph), std::move(trees), std::move(strides)};
    return bp;
}

} // namespace cmg
