#include "cmg/pipeline.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "cmg/errors.hpp"

namespace cmg {

MedianAmbient ambient_from(const MedianGraph& q) {
    MedianAmbient a;
    a.n = q.n();
    a.tick_den = q.space().tick_den();
    a.dist_ticks = [&q](std::int64_t x, std::int64_t y) {
        return q.space().dist_ticks((int)x, (int)y);
    };
    a.median = [&q](std::int64_t x, std::int64_t y, std::int64_t z) {
        return (std::int64_t)q.median((int)x, (int)y, (int)z);
    };
    a.hull = [&q](const std::vector<std::int64_t>& s) {
        std::vector<int> si(s.begin(), s.end());
        auto h = q.convex_hull(si);
        MedianAmbient::Hull out;
        out.vertices.assign(h.vertices.begin(), h.vertices.end());
        out.iterations = h.iterations;
        return out;
    };
    return a;
}

MedianAmbient ambient_from(const TreeProduct& p, size_t hull_cap) {
    MedianAmbient a;
    a.n = p.size;
    a.tick_den = 1;
    a.dist_ticks = [&p](std::int64_t x, std::int64_t y) { return p.dist(x, y); };
    a.median = [&p](std::int64_t x, std::int64_t y, std::int64_t z) { return p.median(x, y, z); };
    a.hull = [&p, hull_cap](const std::vector<std::int64_t>& s) {
        // a convex set in a product of trees is the product of its factor hulls
        std::vector<std::vector<int>> fh(p.factors.size());
        for (size_t f = 0; f < p.factors.size(); ++f) {
            std::vector<int> coords;
            for (auto code : s) coords.push_back((int)((code / p.strides[f]) % p.factors[f].n()));
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
            fh[f] = p.factors[f].hull(coords);
        }
        size_t total = 1;
        for (auto& h : fh) {
            total *= h.size();
            if (total > hull_cap) throw ResourceError("ambient hull: enumeration cap exceeded");
        }
        MedianAmbient::Hull out;
        out.iterations = 1;
        std::vector<size_t> idx(fh.size(), 0);
        while (true) {
            std::int64_t code = 0;
            for (size_t f = 0; f < fh.size(); ++f) code += (std::int64_t)fh[f][idx[f]] * p.strides[f];
            out.vertices.push_back(code);
            size_t f = 0;
            while (f < fh.size() && ++idx[f] == fh[f].size()) idx[f++] = 0;
            if (f == fh.size()) break;
        }
        std::sort(out.vertices.begin(), out.vertices.end());
        return out;
    };
    return a;
}

static std::vector<std::int64_t> median_closure_codes(const MedianAmbient& ambient,
                                                      const std::vector<std::int64_t>& seed,
                                                      size_t cap) {
    std::unordered_set<std::int64_t> in(seed.begin(), seed.end());
    std::vector<std::int64_t> mem(in.begin(), in.end());
    std::sort(mem.begin(), mem.end());
    if (mem.size() > cap)
        throw ResourceError("cubulate: closure cap exceeded by the " + std::to_string(mem.size()) +
                            "-point image itself");
    if ((std::int64_t)mem.size() == ambient.n) return mem; // the whole ambient is closed
    size_t processed = 0;
    while (processed < mem.size()) {
        size_t old = processed;
        size_t end = mem.size();
        processed = end;
        for (size_t c = old; c < end; ++c)
            for (size_t a = 0; a + 1 < c; ++a)
                for (size_t b = a + 1; b < c; ++b) {
                    std::int64_t m = ambient.median(mem[a], mem[b], mem[c]);
                    if (in.insert(m).second) {
                        mem.push_back(m);
                        if (mem.size() > cap)
                            throw ResourceError("cubulate: closure cap exceeded at " +
                                                std::to_string(mem.size()) + " vertices from " +
                                                std::to_string(seed.size()) + " seeds");
                    }
                }
    }
    std::sort(mem.begin(), mem.end());
    return mem;
}

CubulationResult cubulate(const GraphSpace& source, const MedianFn& src_median,
                          const MedianAmbient& ambient, const std::vector<std::int64_t>& embedding,
                          size_t closure_cap, std::uint64_t seed) {
    if ((int)embedding.size() != source.n()) throw StructuralError("cubulate: embedding not total");
    CubulationResult res;
    res.image = embedding;

    res.closure = median_closure_codes(ambient, embedding, closure_cap);

    // 1-connectivity of M inside the ambient graph
    {
        std::unordered_map<std::int64_t, int> idx;
        for (size_t i = 0; i < res.closure.size(); ++i) idx[res.closure[i]] = (int)i;
        std::vector<char> seen(res.closure.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        size_t cnt = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (size_t v = 0; v < res.closure.size(); ++v)
                if (!seen[v] && ambient.dist_ticks(res.closure[u], res.closure[v]) == ambient.tick_den) {
                    seen[v] = 1;
                    ++cnt;
                    stack.push_back((int)v);
                }
        }
        res.closure_connected = cnt == res.closure.size();
    }

    auto h = ambient.hull(res.closure);
    res.hull = h.vertices;
    res.hull_iterations = h.iterations;

    // gate each image point into the hull (least code on ties)
    res.final_image.resize(source.n());
    for (int v = 0; v < source.n(); ++v) {
        std::int64_t best = -1, bd = -1;
        for (auto q : res.hull) {
            std::int64_t d = ambient.dist_ticks(res.image[v], q);
            if (bd < 0 || d < bd || (d == bd && q < best)) {
                bd = d;
                best = q;
            }
        }
        res.final_image[v] = best;
    }

    // image is inside the hull after gating by construction; measure quality
    auto pairs = pair_sample(source.n(), 20000, seed, 4000);
    if (!pairs.empty()) {
        PointMap ident;
        ident.source_size = source.n();
        ident.target_size = source.n();
        ident.assignment.resize(source.n());
        for (int v = 0; v < source.n(); ++v) ident.assignment[v] = v;
        res.qi = distortion(
            ident, pairs, [&](int a, int b) { return source.dist(a, b); },
            [&](int a, int b) {
                return Rational(ambient.dist_ticks(res.final_image[a], res.final_image[b]),
                                ambient.tick_den);
            });
    }
    auto triples = triple_sample(source.n(), 40000, seed ^ 0x3c3, 6000);
    for (auto& t : triples) {
        int m = src_median(t[0], t[1], t[2]);
        std::int64_t ma = ambient.median(res.final_image[t[0]], res.final_image[t[1]],
                                         res.final_image[t[2]]);
        Rational d(ambient.dist_ticks(res.final_image[m], ma), ambient.tick_den);
        if (d > res.qm_defect) res.qm_defect = d;
    }

    // Hausdorff between the raw image and M
    std::int64_t h2 = 0;
    for (auto c : res.closure) {
        std::int64_t best = -1;
        for (auto i : res.image) {
            std::int64_t d = ambient.dist_ticks(c, i);
            if (best < 0 || d < best) best = d;
        }
        h2 = std::max(h2, best);
    }
    for (auto i : res.image) {
        std::int64_t best = -1;
        for (auto c : res.closure) {
            std::int64_t d = ambient.dist_ticks(i, c);
            if (best < 0 || d < best) best = d;
        }
        h2 = std::max(h2, best);
    }
    res.hausdorff_image_closure = Rational(h2, ambient.tick_den);
    return res;
}

Rational median_quasiconvexity_constant(const GraphSpace& space, const MedianFn& median,
                                        const std::vector<int>& subset) {
    if (subset.empty()) throw StructuralError("quasiconvexity: empty subset");
    Rational worst(0);
    for (int x = 0; x < space.n(); ++x)
        for (size_t i = 0; i < subset.size(); ++i)
            for (size_t j = i; j < subset.size(); ++j) {
                int m = median(x, subset[i], subset[j]);
                std::int64_t best = -1;
                for (int y : subset) {
                    std::int64_t d = space.dist_ticks(m, y);
                    if (best < 0 || d < best) best = d;
                }
                Rational r(best, space.tick_den());
                if (r > worst) worst = r;
            }
    return worst;
}

std::vector<int> quasiinverse_pullback(const CubulationResult& cub, const MedianAmbient& ambient,
                                       const std::vector<std::int64_t>& subcomplex) {
    std::vector<int> pre;
    for (auto q : subcomplex) {
        int best = -1;
        std::int64_t bd = -1;
        for (int v = 0; v < (int)cub.final_image.size(); ++v) {
            std::int64_t d = ambient.dist_ticks(cub.final_image[v], q);
            if (bd < 0 || d < bd || (d == bd && v < best)) {
                bd = d;
                best = v;
            }
        }
        pre.push_back(best);
    }
    std::sort(pre.begin(), pre.end());
    pre.erase(std::unique(pre.begin(), pre.end()), pre.end());
    return pre;
}

ConvexityResult convexity_correspondence(const GraphSpace& source, const MedianFn& src_median,
                                         const CubulationResult& cub, const MedianAmbient& ambient,
                                         const std::vector<int>& subset, const Rational& k) {
    if (subset.empty()) throw StructuralError("convexity_correspondence: empty subset");
    Rational measured = median_quasiconvexity_constant(source, src_median, subset);
    if (measured > k) {
        // locate a witness triple for the error message
        for (int x = 0; x < source.n(); ++x)
            for (size_t i = 0; i < subset.size(); ++i)
                for (size_t j = i; j < subset.size(); ++j) {
                    int m = src_median(x, subset[i], subset[j]);
                    std::int64_t best = -1;
                    for (int y : subset) {
                        std::int64_t d = source.dist_ticks(m, y);
                        if (best < 0 || d < best) best = d;
                    }
                    if (Rational(best, source.tick_den()) > k)
                        throw StructuralError("convexity_correspondence: subset is not " + k.str() +
                                              "-median-quasiconvex; witness triple (" +
                                              std::to_string(x) + "," + std::to_string(subset[i]) +
                                              "," + std::to_string(subset[j]) + ")");
                }
    }

    ConvexityResult res;
    std::vector<std::int64_t> img;
    for (int y : subset) img.push_back(cub.final_image[y]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    res.y_prime = ambient.hull(img).vertices;

    std::int64_t h = 0;
    for (auto q : res.y_prime) {
        std::int64_t best = -1;
        for (auto i : img) {
            std::int64_t d = ambient.dist_ticks(q, i);
            if (best < 0 || d < best) best = d;
        }
        h = std::max(h, best);
    }
    res.hausdorff = Rational(h, ambient.tick_den); // img is inside Y', so one side suffices

    res.preimage = quasiinverse_pullback(cub, ambient, res.y_prime);
    res.k0_reverse = median_quasiconvexity_constant(source, src_median, res.preimage);
    return res;
}

GraphSpace induced_graph(const MedianAmbient& ambient, const std::vector<std::int64_t>& verts) {
    std::vector<GraphEdge> edges;
    std::vector<std::string> labels;
    for (size_t i = 0; i < verts.size(); ++i) {
        labels.push_back(std::to_string(verts[i]));
        for (size_t j = i + 1; j < verts.size(); ++j)
            if (ambient.dist_ticks(verts[i], verts[j]) == ambient.tick_den)
                edges.push_back({(int)i, (int)j, Rational(1)});
    }
    return GraphSpace((int)verts.size(), std::move(edges), std::move(labels));
}

Rational gating_displacement(const CubulationResult& cub, const MedianAmbient& ambient) {
    std::int64_t worst = 0;
    for (size_t v = 0; v < cub.image.size(); ++v)
        worst = std::max(worst, ambient.dist_ticks(cub.image[v], cub.final_image[v]));
    return Rational(worst, ambient.tick_den);
}

static bool crosses(const Hyperplane& h, const std::vector<int>& verts) {
    bool a = false, b = false;
    for (int v : verts) {
        if (h.side_a.test(v)) a = true;
        else b = true;
        if (a && b) return true;
    }
    return false;
}

ApproxSetsReport approximate_finite_sets(const MedianGraph& q, const std::vector<int>& f1,
                                         const std::vector<int>& f2, const Rational& K) {
    if (f1.size() != f2.size()) throw StructuralError("approximate_finite_sets: |F1| != |F2|");
    if (f1.empty()) throw StructuralError("approximate_finite_sets: empty sets");
    ApproxSetsReport rep;
    rep.hull1 = q.convex_hull(f1).vertices;
    rep.hull2 = q.convex_hull(f2).vertices;

    const auto& hs = q.hyperplanes();
    std::vector<int> common;
    for (int h = 0; h < (int)hs.size(); ++h) {
        bool c1 = crosses(hs[h], rep.hull1);
        bool c2 = crosses(hs[h], rep.hull2);
        if (c1 != c2) ++rep.differing_hyperplanes;
        if (c1 && c2) common.push_back(h);
    }
    Rational haus = hausdorff(q.space(), f1, f2);
    rep.bound_checked = haus <= K;
    if (rep.bound_checked)
        rep.bound_ok = Rational(rep.differing_hyperplanes) <= Rational(2) * Rational((int)f1.size()) * K;

    // mutually gated cores
    auto c1 = q.convex_subgraph(rep.hull1);
    auto c2 = q.convex_subgraph(rep.hull2);
    auto gate_set = [&](const ConvexSubgraph& target, const std::vector<int>& from) {
        std::vector<int> out;
        for (int v : from) out.push_back(q.gate(target, v));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    rep.core1 = gate_set(c1, rep.hull2);
    rep.core2 = gate_set(c2, rep.hull1);

    // the gate map restricts to a graph isomorphism between the cores
    std::unordered_map<int, int> fwd;
    rep.gate_isomorphism = true;
    for (int v : rep.core1) fwd[v] = q.gate(c2, v);
    {
        std::vector<int> img;
        for (auto& [a, b] : fwd) img.push_back(b);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img != rep.core2 || fwd.size() != rep.core1.size()) rep.gate_isomorphism = false;
    }
    if (rep.gate_isomorphism) {
        for (int a : rep.core1)
            for (int b : rep.core1) {
                auto da = q.space().dist_ticks(a, b);
                auto db = q.space().dist_ticks(fwd[a], fwd[b]);
                if ((da == 1) != (db == 1)) rep.gate_isomorphism = false;
            }
    }

    // the cores are dual to the hyperplanes crossing both hulls
    {
        std::vector<int> c1h, c2h;
        for (int h = 0; h < (int)hs.size(); ++h) {
            if (crosses(hs[h], rep.core1)) c1h.push_back(h);
            if (crosses(hs[h], rep.core2)) c2h.push_back(h);
        }
        rep.cores_dual_to_common = c1h == common && c2h == common;
    }

    rep.hausdorff_cores = hausdorff(q.space(), rep.core1, rep.core2);
    rep.hausdorff_cores_ok = rep.hausdorff_cores <= Rational(2) * K;
    return rep;
}

} // namespace cmg
