#include "cmg/coarse_median.hpp"

#include <algorithm>

#include "cmg/errors.hpp"

namespace cmg {

static std::int64_t dist_to_set_ticks(const GraphSpace& g, int v, const std::vector<int>& s) {
    std::int64_t best = -1;
    for (int u : s) {
        std::int64_t d = g.dist_ticks(v, u);
        if (best < 0 || d < best) best = d;
    }
    return best;
}

int coarse_median(const GraphSpace& g, int x, int y, int z) {
    auto gxy = g.geodesic(x, y);
    auto gyz = g.geodesic(y, z);
    auto gxz = g.geodesic(x, z);
    int best = -1;
    std::int64_t best_cost = -1;
    for (int v = 0; v < g.n(); ++v) {
        std::int64_t c = dist_to_set_ticks(g, v, gxy) + dist_to_set_ticks(g, v, gyz) +
                         dist_to_set_ticks(g, v, gxz);
        if (best < 0 || c < best_cost) {
            best = v;
            best_cost = c;
        }
    }
    return best;
}

QgDefect unparam_qg_defect(const GraphSpace& g, const std::vector<int>& path) {
    if (path.empty()) throw StructuralError("unparam_qg_defect: empty path");
    auto geo = g.geodesic(path.front(), path.back());
    std::int64_t h = hausdorff_ticks(g, path, geo);

    std::int64_t worst = 0;
    std::int64_t max_prefix = 0;
    for (int t = 0; t < (int)path.size(); ++t) {
        std::int64_t p = g.dist_ticks(path.front(), path[t]);
        worst = std::max(worst, max_prefix - p);
        max_prefix = std::max(max_prefix, p);
    }
    return {Rational(h, g.tick_den()), Rational(worst, g.tick_den())};
}

LocalToGlobalReport local_to_global_check(const GraphSpace& g, const LocalToGlobalInput& in) {
    const auto& path = in.path;
    if (path.empty()) throw StructuralError("local_to_global_check: empty path");
    for (size_t t = 0; t + 1 < path.size(); ++t) {
        bool adjacent = false;
        for (auto [v, e] : g.neighbors(path[t]))
            if (v == path[t + 1]) adjacent = true;
        if (!adjacent && path[t] != path[t + 1])
            throw StructuralError("local_to_global_check: concatenation is not a path in g");
    }
    for (size_t j = 0; j < in.beta.size(); ++j) {
        const auto& b = in.beta[j];
        if (b.first > b.last || b.first < 0 || b.last >= (int)path.size())
            throw StructuralError("local_to_global_check: bad beta range");
        if (j > 0 && in.beta[j - 1].last >= b.first)
            throw StructuralError("local_to_global_check: beta ranges overlap");
    }

    // interleaved segment list: alpha_0, beta_0, alpha_1, beta_1, ...
    struct Seg {
        bool is_beta;
        std::vector<int> verts;
    };
    std::vector<Seg> segs;
    int cursor = 0;
    for (size_t j = 0; j < in.beta.size(); ++j) {
        Seg a{false, {}};
        for (int t = cursor; t < in.beta[j].first; ++t) a.verts.push_back(path[t]);
        segs.push_back(std::move(a));
        Seg b{true, {}};
        for (int t = in.beta[j].first; t <= in.beta[j].last; ++t) b.verts.push_back(path[t]);
        segs.push_back(std::move(b));
        cursor = in.beta[j].last + 1;
    }
    Seg tail{false, {}};
    for (int t = cursor; t < (int)path.size(); ++t) tail.verts.push_back(path[t]);
    segs.push_back(std::move(tail));

    LocalToGlobalReport rep;
    Rational three_k = in.k * Rational(3);

    auto seg_diam = [&](const std::vector<int>& s) {
        std::int64_t d = 0;
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j) d = std::max(d, g.dist_ticks(s[i], s[j]));
        return Rational(d, g.tick_den());
    };

    for (int si = 0; si < (int)segs.size(); ++si) {
        if (!segs[si].is_beta) continue;
        for (int other : {si - 2, si + 2, si - 1, si + 1}) {
            if (other < 0 || other >= (int)segs.size() || segs[other].verts.empty()) continue;
            for (auto& [r, bound] : in.f_samples) {
                Rational radius = three_k + r;
                std::vector<int> overlap;
                for (int v : segs[other].verts) {
                    Rational dv(dist_to_set_ticks(g, v, segs[si].verts), g.tick_den());
                    if (dv <= radius) overlap.push_back(v);
                }
                Rational diam = overlap.empty() ? Rational(0) : seg_diam(overlap);
                bool ok = diam <= bound;
                rep.overlaps.push_back({si, other, segs[other].is_beta, r, diam, ok});
                if (!ok) rep.overlaps_ok = false;
            }
        }
    }

    for (const auto& s : segs) {
        if (!s.is_beta) continue;
        std::int64_t len = 0;
        for (size_t t = 0; t + 1 < s.verts.size(); ++t) len += g.dist_ticks(s.verts[t], s.verts[t + 1]);
        Rational l(len, g.tick_den());
        rep.beta_lengths.push_back(l);
        if (l < in.l0) rep.lengths_ok = false;
    }

    rep.defect = unparam_qg_defect(g, path);
    return rep;
}

} // namespace cmg
