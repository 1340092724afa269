#include "cmg/hyperbolicity.hpp"

#include <algorithm>

namespace cmg {

// generic over a distance functor returning int64 ticks
template <class Dist>
static std::int64_t four_point_ticks(int n, Dist&& d) {
    std::int64_t best = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            std::int64_t dab = d(a, b);
            for (int c = b + 1; c < n; ++c) {
                std::int64_t dac = d(a, c), dbc = d(b, c);
                for (int e = c + 1; e < n; ++e) {
                    std::int64_t s1 = dab + d(c, e);
                    std::int64_t s2 = dac + d(b, e);
                    std::int64_t s3 = dbc + d(a, e);
                    std::int64_t hi = std::max({s1, s2, s3});
                    std::int64_t mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
                    best = std::max(best, hi - mid);
                }
            }
        }
    return best;
}

Rational four_point_delta(const GraphSpace& g) {
    g.ensure_metric();
    std::int64_t t = four_point_ticks(g.n(), [&](int i, int j) { return g.dist_ticks(i, j); });
    return Rational(t, 2 * g.tick_den());
}

Rational four_point_delta(const FiniteMetricSpace& m) {
    // bring the matrix to a common denominator so the scan runs on int64
    std::int64_t den = 1;
    for (const auto& r : m.dist) {
        __int128 l = (__int128)den / std::gcd(den, r.den) * r.den;
        den = Rational::narrow(l);
    }
    std::vector<std::int64_t> t(m.dist.size());
    for (size_t i = 0; i < m.dist.size(); ++i)
        t[i] = Rational::narrow((__int128)m.dist[i].num * (den / m.dist[i].den));
    int n = m.n();
    std::int64_t best = four_point_ticks(n, [&](int i, int j) { return t[(size_t)i * n + j]; });
    return Rational(best, 2 * den);
}

} // namespace cmg
