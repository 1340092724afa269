#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmg/coarse_median.hpp"
#include "cmg/errors.hpp"
#include "cmg/graph_space.hpp"
#include "cmg/hyperbolicity.hpp"
#include "cmg/maps.hpp"
#include "cmg/metric_space.hpp"
#include "test_util.hpp"

using namespace cmg;
using cmg_test::rr;

static FiniteMetricSpace grid_subset_l1(int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<int, int>> pts;
    while ((int)pts.size() < count) {
        std::pair<int, int> p{(int)rng.below(12), (int)rng.below(12)};
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    FiniteMetricSpace m;
    for (int i = 0; i < count; ++i) m.points.push_back("p" + std::to_string(i));
    m.dist.assign((size_t)count * count, Rational(0));
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
            m.d(i, j) = Rational(std::abs(pts[i].first - pts[j].first) +
                                 std::abs(pts[i].second - pts[j].second));
    return m;
}

TEST_CASE("check_metric accepts valid spaces and locates violations") {
    FiniteMetricSpace one;
    one.points = {"a"};
    one.dist = {Rational(0)};
    CHECK(check_metric(one).ok());

    FiniteMetricSpace bad;
    bad.points = {"a", "b"};
    bad.dist = {Rational(0), Rational(1), Rational(2), Rational(0)};
    auto rep = check_metric(bad);
    CHECK(!rep.ok());
    bool found = false;
    for (auto& v : rep.violations)
        if (v.kind == MetricViolation::Symmetry && v.i == 0 && v.j == 1) found = true;
    CHECK(found);

    auto grid = grid_subset_l1(20, 7);
    CHECK(check_metric(grid).ok());

    FiniteMetricSpace tri;
    tri.points = {"a", "b", "c"};
    tri.dist.assign(9, Rational(0));
    tri.d(0, 1) = tri.d(1, 0) = Rational(1);
    tri.d(1, 2) = tri.d(2, 1) = Rational(1);
    tri.d(0, 2) = tri.d(2, 0) = Rational(5);
    auto rep2 = check_metric(tri);
    CHECK(!rep2.ok());
    bool tri_found = false;
    for (auto& v : rep2.violations)
        if (v.kind == MetricViolation::Triangle) tri_found = true;
    CHECK(tri_found);
}

TEST_CASE("graph metric equals an independent recomputation") {
    CHECK(cmg_test::matrix_matches(GraphSpace::grid(5, 7)));
    CHECK(cmg_test::matrix_matches(GraphSpace::cycle(9)));
    CHECK(cmg_test::matrix_matches(GraphSpace::random_tree(40, 3)));
    // weighted
    std::vector<GraphEdge> es = {{0, 1, rr(1, 2)}, {1, 2, rr(3, 2)}, {0, 2, rr(7, 2)}, {2, 3, rr(2)}};
    GraphSpace g(4, es);
    CHECK(cmg_test::matrix_matches(g));
    CHECK(g.dist(0, 2) == rr(2));
}

TEST_CASE("four_point_delta: trees are 0, the unit 4-cycle is 1") {
    for (std::uint64_t s : {1ULL, 2ULL, 3ULL, 11ULL})
        CHECK(four_point_delta(GraphSpace::random_tree(25, s)) == rr(0));
    CHECK(four_point_delta(GraphSpace::cycle(4)) == rr(1));
    FiniteMetricSpace one;
    one.points = {"a"};
    one.dist = {Rational(0)};
    CHECK(four_point_delta(one) == rr(0));
    // independent quadruple-scan oracle (ordered quadruples, FW matrix)
    GraphSpace g = GraphSpace::grid(3, 4);
    auto fw = cmg_test::floyd_warshall_ticks(g);
    int n = g.n();
    std::int64_t best = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    auto D = [&](int i, int j) { return fw[(size_t)i * n + j]; };
                    std::int64_t s1 = D(a, b) + D(c, d), s2 = D(a, c) + D(b, d),
                                 s3 = D(a, d) + D(b, c);
                    std::int64_t hi = std::max({s1, s2, s3});
                    std::int64_t mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
                    best = std::max(best, hi - mid);
                }
    CHECK(four_point_delta(g) == Rational(best, 2));
}

TEST_CASE("geodesic honours the least-predecessor tie-break") {
    GraphSpace p3 = GraphSpace::path(3);
    CHECK(p3.geodesic(0, 2) == std::vector<int>{0, 1, 2});
    CHECK(p3.geodesic(1, 1) == std::vector<int>{1});
    GraphSpace c4 = GraphSpace::cycle(4);
    CHECK(c4.geodesic(0, 2) == std::vector<int>{0, 1, 2});
    GraphSpace g = GraphSpace::grid(4, 4);
    CHECK(g.geodesic(0, 15) == g.geodesic(0, 15));
}

TEST_CASE("coarse_median equals the tree median and the exhaustive minimizer") {
    GraphSpace path5 = GraphSpace::path(5);
    CHECK(coarse_median(path5, 0, 4, 2) == 2);
    CHECK(coarse_median(path5, 3, 3, 3) == 3);

    // exhaustive over all triples of a 72-vertex tree, oracle matrix cached
    {
        GraphSpace tree = GraphSpace::random_tree(72, 17);
        auto fw = cmg_test::floyd_warshall_ticks(tree);
        int n = tree.n();
        auto D = [&](int a, int b) { return fw[(size_t)a * n + b]; };
        int bad = 0;
        for (int x = 0; x < n && bad == 0; ++x)
            for (int y = x + 1; y < n && bad == 0; ++y)
                for (int z = y + 1; z < n; ++z) {
                    int m = coarse_median(tree, x, y, z);
                    bool is_median = D(x, m) + D(m, y) == D(x, y) &&
                                     D(y, m) + D(m, z) == D(y, z) && D(x, m) + D(m, z) == D(x, z);
                    if (!is_median) { ++bad; break; }
                }
        CHECK(bad == 0);
    }
    // strided triples on a larger tree within the 200-vertex bound
    {
        GraphSpace tree = GraphSpace::random_tree(150, 29);
        auto fw = cmg_test::floyd_warshall_ticks(tree);
        int n = tree.n();
        auto D = [&](int a, int b) { return fw[(size_t)a * n + b]; };
        for (int x = 0; x < n; x += 13)
            for (int y = 1; y < n; y += 17)
                for (int z = 2; z < n; z += 19) {
                    int m = coarse_median(tree, x, y, z);
                    CHECK(D(x, m) + D(m, y) == D(x, y));
                    CHECK(D(y, m) + D(m, z) == D(y, z));
                    CHECK(D(x, m) + D(m, z) == D(x, z));
                }
    }

    // 6x6 grid, three corners: the returned vertex attains the brute-force
    // minimum of summed distances to the three fixed geodesics
    GraphSpace g = GraphSpace::grid(6, 6);
    int x = 0, y = 5, z = 30;
    int m = coarse_median(g, x, y, z);
    auto gxy = g.geodesic(x, y);
    auto gyz = g.geodesic(y, z);
    auto gxz = g.geodesic(x, z);
    auto cost = [&](int v) {
        auto dset = [&](const std::vector<int>& s) {
            std::int64_t b = INT64_MAX;
            for (int u : s) b = std::min(b, g.dist_ticks(v, u));
            return b;
        };
        return dset(gxy) + dset(gyz) + dset(gxz);
    };
    std::int64_t best = INT64_MAX;
    for (int v = 0; v < g.n(); ++v) best = std::min(best, cost(v));
    CHECK(cost(m) == best);
}

TEST_CASE("unparam_qg_defect: geodesics and constants are flat, staircases are not") {
    GraphSpace tree = GraphSpace::random_tree(30, 5);
    auto geo = tree.geodesic(0, 17);
    auto d = unparam_qg_defect(tree, geo);
    CHECK(d.hausdorff_to_geodesic == rr(0));
    CHECK(d.backtrack == rr(0));

    auto c = unparam_qg_defect(tree, std::vector<int>{12, 12, 12});
    CHECK(c.hausdorff_to_geodesic == rr(0));
    CHECK(c.backtrack == rr(0));

    // 5x5 grid staircase between opposite corners; 3 frozen from the
    // exhaustive evaluation below
    GraphSpace g = GraphSpace::grid(5, 5);
    std::vector<int> stairs = {0, 1, 6, 7, 12, 13, 18, 19, 24};
    auto s = unparam_qg_defect(g, stairs);
    auto geo2 = g.geodesic(0, 24);
    auto fw = cmg_test::floyd_warshall_ticks(g);
    auto D = [&](int a, int b) { return fw[(size_t)a * g.n() + b]; };
    std::int64_t h = 0;
    for (int a : stairs) {
        std::int64_t b = INT64_MAX;
        for (int v : geo2) b = std::min(b, D(a, v));
        h = std::max(h, b);
    }
    for (int v : geo2) {
        std::int64_t b = INT64_MAX;
        for (int a : stairs) b = std::min(b, D(a, v));
        h = std::max(h, b);
    }
    CHECK(s.hausdorff_to_geodesic == Rational(h));
    CHECK(s.hausdorff_to_geodesic == rr(3));
    CHECK(s.backtrack == rr(0));

    CHECK_THROWS_AS(unparam_qg_defect(g, {}), StructuralError);
}

TEST_CASE("distortion search returns the lexicographically minimal grid pair") {
    GraphSpace p = GraphSpace::path(10);
    PointMap ident;
    ident.source_size = ident.target_size = 10;
    ident.assignment.resize(10);
    for (int i = 0; i < 10; ++i) ident.assignment[i] = i;
    auto pairs = pair_sample(10, 1000, 1, 0);
    auto qi = distortion(
        ident, pairs, [&](int a, int b) { return p.dist(a, b); },
        [&](int a, int b) { return p.dist(a, b); });
    CHECK(qi.lambda == rr(1));
    CHECK(qi.eps == rr(0));

    // doubling all edge lengths doubles distances exactly
    std::vector<GraphEdge> es;
    for (int i = 0; i + 1 < 10; ++i) es.push_back({i, i + 1, rr(2)});
    GraphSpace dbl(10, es);
    auto qi2 = distortion(
        ident, pairs, [&](int a, int b) { return p.dist(a, b); },
        [&](int a, int b) { return dbl.dist(a, b); });
    CHECK(qi2.lambda == rr(2));
    CHECK(qi2.eps == rr(0));

    CHECK_THROWS_AS(distortion(
                        ident, {}, [&](int a, int b) { return p.dist(a, b); },
                        [&](int a, int b) { return p.dist(a, b); }),
                    StructuralError);

    // composition: the composed constants stay feasible for g.f
    std::vector<GraphEdge> es4;
    for (int i = 0; i + 1 < 10; ++i) es4.push_back({i, i + 1, rr(4)});
    GraphSpace quad(10, es4);
    Rational lam = rr(2) * rr(2), eps = rr(2) * rr(0) + rr(0);
    for (auto [a, b] : pairs) {
        Rational dx = p.dist(a, b), dy = quad.dist(a, b);
        CHECK(dy <= lam * dx + eps);
        CHECK(dx / lam - eps <= dy);
    }
}

TEST_CASE("quasimedian defects vanish for identity and isometric tree maps") {
    GraphSpace tree = GraphSpace::random_tree(40, 9);
    PointMap ident;
    ident.source_size = ident.target_size = tree.n();
    ident.assignment.resize(tree.n());
    for (int i = 0; i < tree.n(); ++i) ident.assignment[i] = i;
    MedianFn med = [&](int a, int b, int c) { return cmg_test::tree_median_oracle(tree, a, b, c); };
    DistFn dd = [&](int a, int b) { return tree.dist(a, b); };

    auto triples = triple_sample(tree.n(), 3000, 3, 500);
    CHECK(quasimedian_defect(ident, triples, med, med, dd) == rr(0));

    std::vector<std::array<int, 3>> degen;
    for (int i = 0; i < tree.n(); i += 3) degen.push_back({i, i, i});
    CHECK(quasimedian_defect(ident, degen, med, med, dd) == rr(0));

    auto pairs = pair_sample(tree.n(), 2000, 4, 300);
    CHECK(pinned_quasimedian_defect(ident, 0, pairs, med, med, dd) == rr(0));

    // pairs whose first point is the basepoint: mu(x0, x2, x0) = x0 in a tree
    std::vector<std::pair<int, int>> pinned;
    for (int i = 0; i < tree.n(); i += 2) pinned.push_back({0, i});
    CHECK(pinned_quasimedian_defect(ident, 0, pinned, med, med, dd) == rr(0));
}

TEST_CASE("local_to_global_check measures decompositions") {
    GraphSpace tree = GraphSpace::random_tree(50, 21);
    LocalToGlobalInput in;
    in.path = tree.geodesic(0, 33);
    in.k = four_point_delta(tree);
    in.lambda = rr(1);
    in.l0 = rr(0);
    in.f_samples = {{rr(1), rr(100)}};
    auto rep = local_to_global_check(tree, in);
    CHECK(rep.overlaps_ok);
    CHECK(rep.lengths_ok);
    CHECK(rep.defect.hausdorff_to_geodesic == rr(0));
    CHECK(rep.defect.backtrack == rr(0));

    // two tree geodesics joined at the centre vertex concatenate to a geodesic
    GraphSpace spider = GraphSpace::path(21);
    LocalToGlobalInput in2;
    in2.path = spider.geodesic(0, 20);
    in2.beta = {{0, 10}, {11, 20}};
    in2.k = rr(0);
    in2.lambda = rr(1);
    in2.l0 = rr(5);
    in2.f_samples = {{rr(2), rr(8)}};
    auto rep2 = local_to_global_check(spider, in2);
    CHECK(rep2.lengths_ok);
    CHECK(rep2.defect.hausdorff_to_geodesic == rr(0));

    // three-line concatenation in a grid
    GraphSpace g = GraphSpace::grid(7, 7);
    std::vector<int> path = {0, 1, 2, 3, 10, 17, 24, 31, 38, 45, 46, 47, 48};
    LocalToGlobalInput in3;
    in3.path = path;
    in3.beta = {{0, 3}, {4, 9}, {10, 12}};
    in3.k = four_point_delta(g);
    in3.lambda = rr(1);
    in3.l0 = rr(2);
    in3.f_samples = {{rr(1), rr(20)}};
    auto rep3 = local_to_global_check(g, in3);
    CHECK(rep3.lengths_ok);
    CHECK(rep3.defect.backtrack == rr(0)); // the concatenation is itself a geodesic
    // Hausdorff to the fixed tie-break geodesic, against the independent matrix
    {
        auto geo = g.geodesic(0, 48);
        auto fw = cmg_test::floyd_warshall_ticks(g);
        auto D = [&](int a, int b) { return fw[(size_t)a * g.n() + b]; };
        std::int64_t h = 0;
        for (int a : path) {
            std::int64_t b = INT64_MAX;
            for (int v : geo) b = std::min(b, D(a, v));
            h = std::max(h, b);
        }
        for (int v : geo) {
            std::int64_t b = INT64_MAX;
            for (int a : path) b = std::min(b, D(a, v));
            h = std::max(h, b);
        }
        CHECK(rep3.defect.hausdorff_to_geodesic == Rational(h));
        CHECK(rep3.defect.hausdorff_to_geodesic == rr(3));
    }

    std::vector<int> notpath = {0, 5};
    LocalToGlobalInput bad;
    bad.path = notpath;
    bad.k = rr(1);
    bad.lambda = rr(1);
    bad.l0 = rr(0);
    CHECK_THROWS_AS(local_to_global_check(g, bad), StructuralError);
}

TEST_CASE("visualize preserves original distances") {
    GraphSpace tri = GraphSpace::cycle(3);
    GraphSpace v = visualize(tri, 2);
    CHECK(v.n() == 9);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(v.dist_ticks(a, b) == tri.dist_ticks(a, b));

    GraphSpace one(1, {});
    GraphSpace ray = visualize(one, 3);
    CHECK(ray.n() == 4);
    CHECK(ray.dist_ticks(0, 3) == 3);

    for (std::uint64_t s : {2ULL, 8ULL}) {
        GraphSpace t = GraphSpace::random_tree(20, s);
        GraphSpace vt = visualize(t, 2);
        for (int a = 0; a < t.n(); ++a)
            for (int b = 0; b < t.n(); ++b) CHECK(vt.dist_ticks(a, b) == t.dist_ticks(a, b));
    }
}
