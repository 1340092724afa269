#include "cmg/covers.hpp"

#include <algorithm>
#include <map>

#include "cmg/errors.hpp"

namespace cmg {

CoverStrategy cover_strategy_from_string(const std::string& s) {
    if (s == "ultrametric") return CoverStrategy::Ultrametric;
    if (s == "line_dyadic") return CoverStrategy::LineDyadic;
    if (s == "grid") return CoverStrategy::Grid;
    throw ParameterError("unknown cover strategy: " + s);
}

std::string to_string(CoverStrategy s) {
    switch (s) {
        case CoverStrategy::Ultrametric: return "ultrametric";
        case CoverStrategy::LineDyadic: return "line_dyadic";
        case CoverStrategy::Grid: return "grid";
    }
    return "?";
}

VertexBits ColouredCoverSequence::neighbourhood(int element_id, const Rational& radius) const {
    const auto& el = elements[element_id];
    VertexBits out(base.n());
    for (int z = 0; z < base.n(); ++z) {
        for (int p : el.points)
            if (base.d(z, p) < radius) {
                out.set(z);
                break;
            }
    }
    return out;
}

static std::int64_t rational_floor(const Rational& x) {
    std::int64_t q = x.num / x.den;
    if (x.num % x.den != 0 && x.num < 0) --q;
    return q;
}

static void push_element(ColouredCoverSequence& cov, int colour, int level, std::vector<int> pts) {
    std::sort(pts.begin(), pts.end());
    CoverElement el;
    el.colour = colour;
    el.level = level;
    el.bits = VertexBits(cov.base.n());
    for (int p : pts) el.bits.set(p);
    el.points = std::move(pts);
    el.nominal_scale = cov.r.pow(level);
    cov.by_colour_level[colour][level].push_back((int)cov.elements.size());
    cov.elements.push_back(std::move(el));
}

static void build_level_zero(ColouredCoverSequence& cov) {
    std::vector<int> all(cov.base.n());
    for (int i = 0; i < cov.base.n(); ++i) all[i] = i;
    for (int c = 0; c < cov.num_colours; ++c) push_element(cov, c, 0, all);
}

static void build_ultrametric(ColouredCoverSequence& cov) {
    const auto& m = cov.base;
    if (!m.is_ultrametric()) throw BuildError("covers(ultrametric): base is not an ultrametric");
    for (int k = 1; k <= cov.k_max; ++k) {
        Rational rad = cov.r.pow(k) / Rational(2);
        std::map<std::vector<std::uint64_t>, std::vector<int>> balls;
        for (int p = 0; p < m.n(); ++p) {
            VertexBits b(m.n());
            for (int z = 0; z < m.n(); ++z)
                if (m.d(p, z) <= rad) b.set(z);
            balls[b.w]; // ensure key
        }
        for (auto& [key, pts] : balls) {
            VertexBits b(m.n());
            b.w = key;
            push_element(cov, 0, k, b.to_vector());
        }
    }
}

// one coordinate per point, recovered from the matrix if not supplied
static std::vector<Rational> line_coordinates(const FiniteMetricSpace& m) {
    int anchor = 0;
    for (int z = 0; z < m.n(); ++z)
        if (m.d(0, z) > m.d(0, anchor)) anchor = z;
    std::vector<Rational> x(m.n());
    for (int z = 0; z < m.n(); ++z) x[z] = m.d(anchor, z);
    for (int a = 0; a < m.n(); ++a)
        for (int b = 0; b < m.n(); ++b)
            if ((x[a] - x[b]).abs() != m.d(a, b))
                throw BuildError("covers(line_dyadic): base is not isometric to a subset of a line");
    return x;
}

// half-open shifted windows [ (4i+2c)u - d, (4i+2c+2)u + d ) on one axis
struct AxisWindows {
    Rational u, dlt;
    // window index for coordinate x and shift c, or INT64_MIN if x is in the gap
    std::int64_t index_of(const Rational& x, int c) const {
        for (std::int64_t i = rational_floor((x - Rational(2 * c) * u - dlt) / (u * Rational(4))) - 1;; ++i) {
            Rational lo = Rational(4 * i + 2 * c) * u - dlt;
            Rational hi = Rational(4 * i + 2 * c + 2) * u + dlt;
            if (lo > x) return INT64_MIN;
            if (x < hi) return i;
        }
    }
};

static void build_line(ColouredCoverSequence& cov) {
    auto x = cov.base.coords.empty() ? line_coordinates(cov.base) : [&] {
        std::vector<Rational> v(cov.base.n());
        for (int z = 0; z < cov.base.n(); ++z) {
            if (cov.base.coords[z].size() != 1)
                throw BuildError("covers(line_dyadic): coords must be one-dimensional");
            v[z] = cov.base.coords[z][0];
        }
        return v;
    }();
    for (int k = 1; k <= cov.k_max; ++k) {
        Rational rk = cov.r.pow(k);
        AxisWindows w{rk * Rational(3, 8), rk * Rational(1, 8)};
        for (int c = 0; c < 2; ++c) {
            std::map<std::int64_t, std::vector<int>> windows;
            for (int z = 0; z < cov.base.n(); ++z) {
                std::int64_t i = w.index_of(x[z], c);
                if (i != INT64_MIN) windows[i].push_back(z);
            }
            for (auto& [i, pts] : windows) push_element(cov, c, k, pts);
        }
    }
}

static void build_grid(ColouredCoverSequence& cov) {
    if (cov.base.coords.empty())
        throw BuildError("covers(grid): base must carry two-dimensional coords");
    int n = cov.base.n();
    std::vector<std::array<Rational, 2>> xy(n);
    for (int z = 0; z < n; ++z) {
        if (cov.base.coords[z].size() != 2)
            throw BuildError("covers(grid): coords must be two-dimensional");
        xy[z] = {cov.base.coords[z][0], cov.base.coords[z][1]};
        // the matrix must be the l1 metric of the coordinates
        for (int q = 0; q < z; ++q) {
            Rational l1 = (xy[z][0] - xy[q][0]).abs() + (xy[z][1] - xy[q][1]).abs();
            if (l1 != cov.base.d(z, q))
                throw BuildError("covers(grid): matrix is not the l1 metric of the coords");
        }
    }
    for (int k = 1; k <= cov.k_max; ++k) {
        Rational rk = cov.r.pow(k);
        AxisWindows w{rk * Rational(3, 16), rk * Rational(1, 16)};
        for (int cx = 0; cx < 2; ++cx)
            for (int cy = 0; cy < 2; ++cy) {
                int colour = cx * 2 + cy;
                std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> windows;
                for (int z = 0; z < n; ++z) {
                    std::int64_t ix = w.index_of(xy[z][0], cx);
                    std::int64_t iy = w.index_of(xy[z][1], cy);
                    if (ix != INT64_MIN && iy != INT64_MIN) windows[{ix, iy}].push_back(z);
                }
                for (auto& [key, pts] : windows) push_element(cov, colour, k, pts);
            }
    }
}

ColouredCoverSequence build_covers(const FiniteMetricSpace& m, const Rational& r, Rational eps,
                                   int k_max, CoverStrategy strategy) {
    if (m.n() == 0) throw StructuralError("build_covers: empty base");
    if (!(m.diameter() < Rational(1))) throw ParameterError("build_covers: base diameter must be < 1");
    if (!(r > Rational(0)) || !(r < Rational(1, 7)))
        throw ParameterError("build_covers: r must lie in (0, 1/7)");
    if (k_max < 0) throw ParameterError("build_covers: negative k_max");

    ColouredCoverSequence cov;
    cov.base = m;
    cov.r = r;
    cov.k_max = k_max;
    cov.strategy = to_string(strategy);

    switch (strategy) {
        case CoverStrategy::Ultrametric:
            cov.num_colours = 1;
            if (eps.is_zero()) eps = Rational(3, 4);
            break;
        case CoverStrategy::LineDyadic:
            cov.num_colours = 2;
            if (eps.is_zero()) eps = Rational(1, 2);
            if (r > Rational(1, 32))
                throw ParameterError("build_covers(line_dyadic): requires r <= 1/32");
            break;
        case CoverStrategy::Grid:
            cov.num_colours = 4;
            if (eps.is_zero()) eps = Rational(1, 4);
            if (r > Rational(1, 32)) throw ParameterError("build_covers(grid): requires r <= 1/32");
            break;
    }
    cov.eps = eps;
    if (!(eps > r * Rational(4)) || eps > Rational(1))
        throw ParameterError("build_covers: eps must satisfy 4r < eps <= 1");

    cov.by_colour_level.assign(cov.num_colours, std::vector<std::vector<int>>(k_max + 1));
    build_level_zero(cov);
    switch (strategy) {
        case CoverStrategy::Ultrametric: build_ultrametric(cov); break;
        case CoverStrategy::LineDyadic: build_line(cov); break;
        case CoverStrategy::Grid: build_grid(cov); break;
    }

    auto rep = check_cover_internal(cov);
    if (!rep.all_ok())
        throw BuildError("build_covers: condition failed: " +
                         (rep.witnesses.empty() ? std::string("?") : rep.witnesses.front()));
    return cov;
}

static std::string el_name(const ColouredCoverSequence& cov, int e) {
    const auto& el = cov.elements[e];
    return "U(c" + std::to_string(el.colour) + ",k" + std::to_string(el.level) + ",#" +
           std::to_string(e) + ")";
}

CoverConditionReport check_cover_internal(const ColouredCoverSequence& cov) {
    CoverConditionReport rep;
    const auto& m = cov.base;

    // (C1) realized diameter < r^k; level 0 must be Z in every colour
    for (int e = 0; e < (int)cov.elements.size(); ++e) {
        const auto& el = cov.elements[e];
        if (el.points.empty()) {
            rep.c1_ok = false;
            rep.witnesses.push_back("empty element " + el_name(cov, e));
            continue;
        }
        Rational bound = cov.r.pow(el.level);
        for (size_t i = 0; i < el.points.size() && rep.c1_ok; ++i)
            for (size_t j = i + 1; j < el.points.size(); ++j)
                if (!(m.d(el.points[i], el.points[j]) < bound)) {
                    rep.c1_ok = false;
                    rep.witnesses.push_back("(C1) diameter >= r^k in " + el_name(cov, e));
                    break;
                }
        if (el.level == 0 && (int)el.points.size() != m.n()) {
            rep.c1_ok = false;
            rep.witnesses.push_back("(C1) level-0 element is not the whole base");
        }
    }

    // per-colour per-level disjointness
    for (int c = 0; c < cov.num_colours; ++c)
        for (int k = 0; k <= cov.k_max; ++k) {
            const auto& ids = cov.by_colour_level[c][k];
            for (size_t a = 0; a < ids.size(); ++a)
                for (size_t b = a + 1; b < ids.size(); ++b)
                    if (cov.elements[ids[a]].bits.intersects(cov.elements[ids[b]].bits)) {
                        rep.disjoint_ok = false;
                        rep.witnesses.push_back("overlap " + el_name(cov, ids[a]) + " and " +
                                                el_name(cov, ids[b]));
                    }
        }

    // each level covers the base across colours
    for (int k = 0; k <= cov.k_max; ++k) {
        VertexBits seen(m.n());
        for (int c = 0; c < cov.num_colours; ++c)
            for (int e : cov.by_colour_level[c][k])
                for (size_t wd = 0; wd < seen.w.size(); ++wd) seen.w[wd] |= cov.elements[e].bits.w[wd];
        if (seen.count() != m.n()) {
            rep.cover_ok = false;
            rep.witnesses.push_back("level " + std::to_string(k) + " does not cover the base");
        }
    }

    // (C3) same colour, levels k <= k': eps r^k' neighbourhood of the deeper
    // element is disjoint from or inside the shallower one
    for (int c = 0; c < cov.num_colours; ++c)
        for (int kp = 0; kp <= cov.k_max; ++kp)
            for (int ep : cov.by_colour_level[c][kp]) {
                VertexBits nb = cov.neighbourhood(ep, cov.eps * cov.r.pow(kp));
                for (int k = 0; k <= kp; ++k)
                    for (int e : cov.by_colour_level[c][k]) {
                        if (e == ep) continue;
                        const auto& big = cov.elements[e].bits;
                        if (nb.intersects(big) && !nb.is_subset_of(big)) {
                            rep.c3_ok = false;
                            rep.witnesses.push_back("(C3) fails for " + el_name(cov, e) + " vs " +
                                                    el_name(cov, ep));
                        }
                    }
            }
    return rep;
}

CoverConditionReport verify_cover_conditions(const ColouredCoverSequence& cov,
                                             const NetHierarchy& nets) {
    if (nets.base.points != cov.base.points || !(nets.r == cov.r))
        throw StructuralError("verify_cover_conditions: covers and nets disagree on base or r");
    CoverConditionReport rep = check_cover_internal(cov);

    // (C2): every level-(k+1) net ball fits inside one element of level k
    int top = std::min(cov.k_max, nets.k_max - 1);
    for (int k = 0; k <= top; ++k) {
        for (int v : nets.levels[k + 1]) {
            VertexBits ball = nets.open_ball(v, nets.ball_radius(k + 1));
            bool inside = false;
            for (int c = 0; c < cov.num_colours && !inside; ++c)
                for (int e : cov.by_colour_level[c][k])
                    if (ball.is_subset_of(cov.elements[e].bits)) {
                        inside = true;
                        break;
                    }
            if (!inside) {
                rep.c2_ok = false;
                rep.witnesses.push_back("(C2) fails for net vertex " + cov.base.points[v] +
                                        " at level " + std::to_string(k + 1));
            }
        }
    }
    return rep;
}

} // namespace cmg
