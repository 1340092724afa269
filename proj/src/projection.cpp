#include "cmg/projection.hpp"

#include <algorithm>
#include <set>

#include "cmg/errors.hpp"

namespace cmg {

Rational ProjectionFamily::set_diameter(int y, const std::vector<int>& vs) const {
    Rational d(0);
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
            Rational x = members[y].dist(vs[i], vs[j]);
            if (x > d) d = x;
        }
    return d;
}

Rational ProjectionFamily::dpi(int y, int x, int z) const {
    std::vector<int> u = proj[y][x];
    u.insert(u.end(), proj[y][z].begin(), proj[y][z].end());
    return set_diameter(y, u);
}

std::vector<int> ProjectionFamily::point_proj(int y, int x_member, int x_local) const {
    if (y == x_member) return {x_local};
    return proj[y][x_member];
}

void ProjectionFamily::check_shape() const {
    if ((int)proj.size() != count()) throw StructuralError("projection family: bad table shape");
    for (int y = 0; y < count(); ++y) {
        if ((int)proj[y].size() != count()) throw StructuralError("projection family: bad table shape");
        for (int x = 0; x < count(); ++x) {
            if (x == y) continue;
            if (proj[y][x].empty()) throw StructuralError("projection family: empty projection set");
            for (int v : proj[y][x])
                if (v < 0 || v >= members[y].n())
                    throw StructuralError("projection family: projection vertex out of range");
        }
    }
}

AxiomVerification verify_projection_axioms(ProjectionFamily& fam, const Rational& cap) {
    fam.check_shape();
    int n = fam.count();
    AxiomVerification out;

    // candidate xi values: realized projection diameters and dpi values
    std::set<Rational> cands;
    Rational p0_floor(0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            if (x == y) continue;
            Rational d = fam.set_diameter(y, fam.proj[y][x]);
            cands.insert(d);
            if (d > p0_floor) p0_floor = d;
            for (int z = x + 1; z < n; ++z)
                if (z != y) cands.insert(fam.dpi(y, x, z));
        }
    cands.insert(p0_floor);

    for (const Rational& xi : cands) {
        if (xi < p0_floor) continue;
        if (xi > cap) break;
        bool ok = true;
        std::array<int, 3> bad{-1, -1, -1};
        // (P1) over all ordered triples: a large pair projection on Z caps the
        // projections seen from both members of the pair
        for (int z = 0; z < n && ok; ++z)
            for (int x = 0; x < n && ok; ++x)
                for (int y = x + 1; y < n && ok; ++y) {
                    if (x == z || y == z) continue;
                    if (fam.dpi(z, x, y) > xi &&
                        (fam.dpi(x, y, z) > xi || fam.dpi(y, x, z) > xi)) {
                        ok = false;
                        bad = {x, y, z};
                    }
                }
        if (ok) {
            out.ok = true;
            out.xi = xi;
            fam.xi = xi;
            fam.xi_verified = true;
            return out;
        }
        out.witness = bad;
    }
    out.what = "no xi below the cap satisfies (P0)+(P1)";
    return out;
}

Rational PerturbedDistances::value(const ProjectionFamily& fam, int y, const std::vector<int>& a,
                                   const std::vector<int>& b) const {
    std::vector<int> u = a;
    u.insert(u.end(), b.begin(), b.end());
    Rational v = fam.set_diameter(y, u);
    if (scheme == Scheme::Floor) {
        v = v - delta;
        if (v < Rational(0)) v = Rational(0);
    }
    return v;
}

Rational PerturbedDistances::member_pair(const ProjectionFamily& fam, int y, int x, int z) const {
    return value(fam, y, fam.proj[y][x], fam.proj[y][z]);
}

PerturbedDistances perturb_distances(const ProjectionFamily& fam, PerturbedDistances::Scheme scheme,
                                     const Rational& delta) {
    if (!fam.xi_verified) throw StructuralError("perturb_distances: verify the family first");
    if (delta < Rational(0)) throw ParameterError("perturb_distances: negative delta");
    PerturbedDistances pert;
    pert.scheme = scheme;
    pert.delta = scheme == PerturbedDistances::Scheme::Identity ? Rational(0) : delta;
    // inequality (1): dpi - delta <= dflat <= dpi, entry-wise over all triples
    int n = fam.count();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            for (int z = x + 1; z < n; ++z) {
                if (x == y || z == y) continue;
                Rational dp = fam.dpi(y, x, z);
                Rational df = pert.member_pair(fam, y, x, z);
                if (!(dp - pert.delta <= df && df <= dp))
                    throw BuildError("perturb_distances: inequality (1) fails at (" +
                                     std::to_string(x) + "," + std::to_string(z) + ";" +
                                     std::to_string(y) + ")");
            }
    return pert;
}

QuasiTree build_qtms(const ProjectionFamily& fam, const PerturbedDistances& pert, const Rational& K,
                     const Rational& L) {
    if (!fam.xi_verified) throw StructuralError("build_qtms: verify the family first");
    if (K < fam.xi) throw ParameterError("build_qtms: K must be at least xi");
    if (L < Rational(1)) throw ParameterError("build_qtms: L must be at least 1");

    QuasiTree qt;
    qt.K = K;
    qt.L = L;
    int n = fam.count();
    qt.offset.resize(n);
    int total = 0;
    for (int i = 0; i < n; ++i) {
        qt.offset[i] = total;
        total += fam.members[i].n();
    }
    std::vector<GraphEdge> edges;
    std::vector<std::string> labels(total);
    qt.member_of.resize(total);
    qt.local_of.resize(total);
    for (int i = 0; i < n; ++i)
        for (int v = 0; v < fam.members[i].n(); ++v) {
            int g = qt.offset[i] + v;
            qt.member_of[g] = i;
            qt.local_of[g] = v;
            labels[g] = "m" + std::to_string(i) + ":" + fam.members[i].label(v);
            for (auto [u, e] : fam.members[i].neighbors(v))
                if (u > v) edges.push_back({g, qt.offset[i] + u, fam.members[i].edges()[e].len});
        }

    qt.pair_edges.assign(n, std::vector<int>(n, 0));
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            bool attach = true;
            for (int z = 0; z < n && attach; ++z) {
                if (z == x || z == y) continue;
                if (pert.member_pair(fam, z, x, y) > K) attach = false;
            }
            if (!attach) continue;
            for (int p : fam.proj[y][x])
                for (int q : fam.proj[x][y]) {
                    edges.push_back({qt.vertex(y, p), qt.vertex(x, q), L});
                    ++qt.pair_edges[x][y];
                    ++qt.pair_edges[y][x];
                }
        }

    qt.g = GraphSpace(total, std::move(edges), std::move(labels), false, true);
    qt.connected = qt.g.connected();
    return qt;
}

std::vector<DistanceFormulaRow> distance_formula_check(
    const QuasiTree& qt, const ProjectionFamily& fam, const PerturbedDistances& pert,
    const Rational& k_prime, const std::vector<std::pair<MemberPoint, MemberPoint>>& pairs) {
    if (!(k_prime > qt.K)) throw ParameterError("distance_formula_check: K' must exceed K");
    const Rational& K = qt.K;
    std::vector<DistanceFormulaRow> rows;
    for (auto& [px, py] : pairs) {
        if (px.member < 0 || px.member >= fam.count() || px.local < 0 ||
            px.local >= fam.members[px.member].n() || py.member < 0 || py.member >= fam.count() ||
            py.local < 0 || py.local >= fam.members[py.member].n())
            throw StructuralError("distance_formula_check: pair not in the member spaces");
        DistanceFormulaRow row;
        row.x = px;
        row.y = py;
        std::int64_t dt = qt.g.dist_ticks(qt.vertex(px.member, px.local), qt.vertex(py.member, py.local));
        row.reachable = dt >= 0;
        if (row.reachable) row.d = Rational(dt, qt.g.tick_den());

        Rational sk(0), skp(0);
        Rational best_val(0);
        int best_z = -1;
        for (int z = 0; z < fam.count(); ++z) {
            Rational v = pert.value(fam, z, fam.point_proj(z, px.member, px.local),
                                    fam.point_proj(z, py.member, py.local));
            if (v >= K) sk += v;
            if (v >= k_prime) skp += v;
            if (best_z < 0 || v > best_val) {
                best_val = v;
                best_z = z;
            }
        }
        row.sum_k = sk;
        row.sum_kprime = skp;
        if (row.reachable) {
            row.upper_ok = row.d <= Rational(6) * K + Rational(4) * sk;
            row.lower_ok = skp / Rational(2) <= row.d;
            if (row.d > Rational(6) * K) {
                row.implication_ok = best_val >= K;
                row.witness_member = best_val >= K ? best_z : -1;
            } else {
                row.implication_ok = true; // vacuous
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RelevantSetResult relevant_set(const ProjectionFamily& fam, MemberPoint x, MemberPoint y,
                               const Rational& t, Rational theta) {
    if (!fam.xi_verified) throw StructuralError("relevant_set: verify the family first");
    if (t < Rational(20) * fam.xi) throw ParameterError("relevant_set: t must be at least 20*xi");
    if (theta.is_zero()) theta = std::max(Rational(4), Rational(4) * fam.xi);

    RelevantSetResult res;
    std::vector<int> rel;
    for (int w = 0; w < fam.count(); ++w) {
        PerturbedDistances ident; // raw diam-union values
        Rational v = ident.value(fam, w, fam.point_proj(w, x.member, x.local),
                                 fam.point_proj(w, y.member, y.local));
        if (v >= t) rel.push_back(w);
    }

    auto less = [&](int u, int v) {
        // u < v when the pair's first point projects to v close to u's shadow
        if (u == v) return false;
        std::vector<int> a = fam.point_proj(v, x.member, x.local);
        std::vector<int> b = fam.proj[v][u];
        std::vector<int> un = a;
        un.insert(un.end(), b.begin(), b.end());
        return fam.set_diameter(v, un) <= theta;
    };

    for (size_t i = 0; i < rel.size(); ++i)
        for (size_t j = i + 1; j < rel.size(); ++j) {
            bool uv = less(rel[i], rel[j]);
            bool vu = less(rel[j], rel[i]);
            if (uv && vu) {
                res.antisymmetric = false;
                res.violations.push_back("antisymmetry fails on members " + std::to_string(rel[i]) +
                                         "," + std::to_string(rel[j]));
            }
            if (!uv && !vu) {
                res.total = false;
                res.violations.push_back("totality fails on members " + std::to_string(rel[i]) + "," +
                                         std::to_string(rel[j]));
            }
        }
    for (int a : rel)
        for (int b : rel)
            for (int c : rel) {
                if (a == b || b == c || a == c) continue;
                if (less(a, b) && less(b, c) && !less(a, c)) {
                    res.transitive = false;
                    res.violations.push_back("transitivity fails on members " + std::to_string(a) + "," +
                                             std::to_string(b) + "," + std::to_string(c));
                }
            }
    if (res.total && res.antisymmetric && res.transitive)
        std::sort(rel.begin(), rel.end(), less);
    res.ordered = rel;
    return res;
}

ProjectionFamily tripod_lines(int leg_length) {
    if (leg_length < 1) throw ParameterError("tripod_lines: leg length must be positive");
    ProjectionFamily fam;
    for (int i = 0; i < 3; ++i) fam.members.push_back(GraphSpace::path(leg_length + 1));
    fam.proj.assign(3, std::vector<std::vector<int>>(3));
    // legs meet at local vertex 0, the tripod centre
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            if (x != y) fam.proj[y][x] = {0};
    fam.expected_xi = Rational(0);
    return fam;
}

ProjectionFamily grid_lines(int count, int spacing, int seg_len) {
    if (count < 2 || spacing < 1) throw ParameterError("grid_lines: bad parameters");
    if (seg_len <= 0) seg_len = 3 * spacing;
    ProjectionFamily fam;
    std::vector<std::int64_t> x0(count), y0(count);
    for (int i = 0; i < count; ++i) {
        x0[i] = (std::int64_t)i * spacing;
        y0[i] = (std::int64_t)i * (seg_len + spacing); // staggered, disjoint vertical ranges
        fam.members.push_back(GraphSpace::path(seg_len + 1));
    }
    auto ambient = [&](int mi, int vi, int mj, int vj) {
        std::int64_t dx = x0[mi] - x0[mj];
        std::int64_t dy = (y0[mi] + vi) - (y0[mj] + vj);
        return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy);
    };
    fam.proj.assign(count, std::vector<std::vector<int>>(count));
    for (int y = 0; y < count; ++y)
        for (int x = 0; x < count; ++x) {
            if (x == y) continue;
            std::set<int> nearest;
            for (int v = 0; v <= seg_len; ++v) {
                std::int64_t best = -1;
                int arg = -1;
                for (int w = 0; w <= seg_len; ++w) {
                    std::int64_t d = ambient(x, v, y, w);
                    if (best < 0 || d < best) {
                        best = d;
                        arg = w;
                    }
                }
                nearest.insert(arg);
            }
            fam.proj[y][x] = {nearest.begin(), nearest.end()};
        }
    fam.expected_xi = Rational(0);
    return fam;
}

ProjectionFamily tree_axes(const GraphSpace& tree, int line_count, std::uint64_t seed) {
    if (tree.edges().size() + 1 != (size_t)tree.n()) throw StructuralError("tree_axes: not a tree");
    std::vector<int> leaves;
    for (int v = 0; v < tree.n(); ++v)
        if (tree.neighbors(v).size() <= 1) leaves.push_back(v);
    if ((int)leaves.size() < 2) throw StructuralError("tree_axes: tree has too few leaves");

    Rng rng(seed);
    std::set<std::pair<int, int>> used;
    std::vector<std::vector<int>> lines;
    int guard = 0;
    while ((int)lines.size() < line_count && guard++ < 10000) {
        int a = leaves[rng.below(leaves.size())];
        int b = leaves[rng.below(leaves.size())];
        if (a == b) continue;
        auto key = std::minmax(a, b);
        if (used.count({key.first, key.second})) continue;
        used.insert({key.first, key.second});
        lines.push_back(tree.geodesic(a, b));
    }
    if ((int)lines.size() < line_count) throw ResourceError("tree_axes: not enough distinct leaf pairs");

    ProjectionFamily fam;
    for (auto& ln : lines) fam.members.push_back(GraphSpace::path((int)ln.size()));
    fam.proj.assign(line_count, std::vector<std::vector<int>>(line_count));
    Rational max_overlap(0);
    for (int y = 0; y < line_count; ++y)
        for (int x = 0; x < line_count; ++x) {
            if (x == y) continue;
            std::set<int> prj;
            for (int xv : lines[x]) {
                std::int64_t best = -1;
                int arg = -1;
                for (size_t w = 0; w < lines[y].size(); ++w) {
                    std::int64_t d = tree.dist_ticks(xv, lines[y][w]);
                    if (best < 0 || d < best) {
                        best = d;
                        arg = (int)w;
                    }
                }
                prj.insert(arg);
            }
            fam.proj[y][x] = {prj.begin(), prj.end()};
            Rational diam = fam.set_diameter(y, fam.proj[y][x]);
            if (diam > max_overlap) max_overlap = diam;
        }
    fam.expected_xi = max_overlap;
    return fam;
}

SweepResult sweep_distance_formula(const ProjectionFamily& fam, const PerturbedDistances& pert,
                                   const std::vector<Rational>& k_grid, const Rational& L,
                                   const Rational& k_prime_factor,
                                   const std::vector<std::pair<MemberPoint, MemberPoint>>& pairs) {
    SweepResult res;
    std::vector<bool> all_pass(k_grid.size(), true);
    for (size_t ki = 0; ki < k_grid.size(); ++ki) {
        const Rational& K = k_grid[ki];
        if (K < fam.xi) {
            all_pass[ki] = false;
            continue;
        }
        QuasiTree qt = build_qtms(fam, pert, K, L);
        Rational kp = K * k_prime_factor;
        if (!(kp > K)) kp = K + Rational(1);
        auto rows = distance_formula_check(qt, fam, pert, kp, pairs);
        for (size_t pi = 0; pi < rows.size(); ++pi) {
            SweepRow sr;
            sr.K = K;
            sr.pair_index = (int)pi;
            sr.row = rows[pi];
            Rational t = std::max(Rational(20) * fam.xi, K);
            auto rel = relevant_set(fam, rows[pi].x, rows[pi].y, t);
            sr.order_total = rel.total && rel.antisymmetric && rel.transitive;
            if (!rows[pi].reachable || !rows[pi].upper_ok || !rows[pi].implication_ok || !sr.order_total)
                all_pass[ki] = false;
            res.rows.push_back(std::move(sr));
        }
    }
    for (size_t ki = 0; ki < k_grid.size(); ++ki) {
        bool from_here = true;
        for (size_t kj = ki; kj < k_grid.size(); ++kj)
            if (!all_pass[kj]) from_here = false;
        if (from_here) {
            res.threshold = k_grid[ki];
            break;
        }
    }
    return res;
}

} // namespace cmg
