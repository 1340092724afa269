#include "cmg/maps.hpp"

#include <array>

#include "cmg/errors.hpp"
#include "cmg/graph_space.hpp"

namespace cmg {

QIReport distortion(const PointMap& f, const std::vector<std::pair<int, int>>& pairs,
                    const DistFn& src_dist, const DistFn& dst_dist, const DistortionGrid& grid) {
    if (pairs.empty()) throw StructuralError("distortion: empty sample");

    std::vector<std::pair<Rational, Rational>> d; // (source, image)
    d.reserve(pairs.size());
    for (auto [x, y] : pairs) {
        if (f(x) < 0 || f(y) < 0) throw StructuralError("distortion: map not total on sample");
        d.push_back({src_dist(x, y), dst_dist(f(x), f(y))});
    }

    QIReport rep;
    rep.sample_size = pairs.size();
    auto round_up = [](const Rational& need, const Rational& base, const Rational& step) {
        if (need <= base) return base;
        Rational steps = (need - base) / step;
        std::int64_t q = steps.num / steps.den;
        Rational v = base + step * Rational(q);
        if (v < need) v += step;
        return v;
    };
    if (grid.eps_first) {
        for (Rational eps(0); eps <= grid.eps_cap; eps += grid.eps_step) {
            // minimal lambda making every pair bound hold at this eps
            Rational need(1);
            bool possible = true;
            for (auto& [dx, dy] : d) {
                if (dy > eps && dx.is_zero()) { possible = false; break; }
                if (!dx.is_zero()) {
                    Rational up = (dy - eps) / dx; // upper bound needs lam >= up
                    if (up > need) need = up;
                }
                Rational denom = dy + eps; // lower bound needs lam >= dx / (dy+eps)
                if (denom.is_zero()) {
                    if (!dx.is_zero()) { possible = false; break; }
                } else {
                    Rational lo = dx / denom;
                    if (lo > need) need = lo;
                }
            }
            if (!possible) continue;
            Rational lam = round_up(need, Rational(1), grid.lambda_step);
            if (lam <= grid.lambda_cap) {
                rep.lambda = lam;
                rep.eps = eps;
                return rep;
            }
        }
    } else {
        for (Rational lam(1); lam <= grid.lambda_cap; lam += grid.lambda_step) {
            Rational need(0);
            for (auto& [dx, dy] : d) {
                Rational upper = dy - lam * dx;
                Rational lower = dx / lam - dy;
                if (upper > need) need = upper;
                if (lower > need) need = lower;
            }
            if (need <= grid.eps_cap) {
                rep.lambda = lam;
                rep.eps = round_up(need, Rational(0), grid.eps_step);
                return rep;
            }
        }
    }
    rep.lambda = grid.lambda_cap;
    rep.eps = grid.eps_cap;
    rep.feasible = false;
    return rep;
}

Rational quasimedian_defect(const PointMap& f, const std::vector<std::array<int, 3>>& triples,
                            const MedianFn& src_median, const MedianFn& dst_median,
                            const DistFn& dst_dist) {
    Rational worst(0);
    for (auto& t : triples) {
        int m = src_median(t[0], t[1], t[2]);
        int m2 = dst_median(f(t[0]), f(t[1]), f(t[2]));
        Rational d = dst_dist(f(m), m2);
        if (d > worst) worst = d;
    }
    return worst;
}

Rational pinned_quasimedian_defect(const PointMap& f, int basepoint,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   const MedianFn& src_median, const MedianFn& dst_median,
                                   const DistFn& dst_dist) {
    Rational worst(0);
    for (auto [x, y] : pairs) {
        int m = src_median(x, y, basepoint);
        int m2 = dst_median(f(x), f(y), f(basepoint));
        Rational d = dst_dist(f(m), m2);
        if (d > worst) worst = d;
    }
    return worst;
}

std::vector<std::pair<int, int>> pair_sample(int n, size_t cap, std::uint64_t seed, size_t sample_size) {
    size_t total = (size_t)n * (n - 1) / 2;
    std::vector<std::pair<int, int>> out;
    if (total <= cap) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) out.push_back({i, j});
    } else {
        Rng rng(seed);
        for (size_t s = 0; s < sample_size; ++s) {
            int i = (int)rng.below(n), j = (int)rng.below(n);
            if (i == j) continue;
            out.push_back({std::min(i, j), std::max(i, j)});
        }
    }
    return out;
}

std::vector<std::array<int, 3>> triple_sample(int n, size_t cap, std::uint64_t seed, size_t sample_size) {
    size_t total = n >= 3 ? (size_t)n * (n - 1) * (n - 2) / 6 : 0;
    std::vector<std::array<int, 3>> out;
    if (total <= cap) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) out.push_back({i, j, k});
    } else {
        Rng rng(seed);
        for (size_t s = 0; s < sample_size; ++s)
            out.push_back({(int)rng.below(n), (int)rng.below(n), (int)rng.below(n)});
    }
    return out;
}

} // namespace cmg
