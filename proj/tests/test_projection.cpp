#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmg/errors.hpp"
#include "cmg/projection.hpp"
#include "test_util.hpp"

using namespace cmg;
using cmg_test::rr;

static ProjectionFamily two_member_family() {
    ProjectionFamily fam;
    fam.members.push_back(GraphSpace::path(5));
    fam.members.push_back(GraphSpace::path(7));
    fam.proj.assign(2, std::vector<std::vector<int>>(2));
    fam.proj[1][0] = {2, 3}; // diameter 1
    fam.proj[0][1] = {0};
    return fam;
}

TEST_CASE("verify_projection_axioms finds the minimal xi") {
    auto fam = two_member_family();
    auto v = verify_projection_axioms(fam);
    CHECK(v.ok);
    CHECK(v.xi == rr(1)); // (P1) is vacuous for two members

    auto tripod = tripod_lines(5);
    auto vt = verify_projection_axioms(tripod);
    CHECK(vt.ok);
    CHECK(vt.xi == rr(0));

    auto gl = grid_lines(5, 3);
    auto vg = verify_projection_axioms(gl);
    CHECK(vg.ok);
    CHECK(vg.xi == rr(0));
    // every projection is a single vertex
    for (int y = 0; y < gl.count(); ++y)
        for (int x = 0; x < gl.count(); ++x)
            if (x != y) CHECK(gl.proj[y][x].size() == 1);

    auto axes = tree_axes(GraphSpace::random_tree(40, 19), 4, 7);
    auto va = verify_projection_axioms(axes);
    CHECK(va.ok);
    CHECK(va.xi <= rr(2) * axes.expected_xi + rr(2));

    // (P0)/(P1) hold at the stored xi, rechecked directly
    for (ProjectionFamily* f : {&fam, &tripod, &gl, &axes}) {
        for (int y = 0; y < f->count(); ++y)
            for (int x = 0; x < f->count(); ++x) {
                if (x == y) continue;
                CHECK(f->set_diameter(y, f->proj[y][x]) <= f->xi);
                for (int z = 0; z < f->count(); ++z) {
                    if (z == x || z == y) continue;
                    if (f->dpi(z, x, y) > f->xi) CHECK(f->dpi(x, y, z) <= f->xi);
                }
            }
    }
}

TEST_CASE("perturb_distances keeps the two-sided inequality") {
    auto gl = grid_lines(4, 3);
    verify_projection_axioms(gl);

    auto ident = perturb_distances(gl, PerturbedDistances::Scheme::Identity);
    for (int y = 0; y < gl.count(); ++y)
        for (int x = 0; x < gl.count(); ++x)
            for (int z = x + 1; z < gl.count(); ++z) {
                if (x == y || z == y) continue;
                CHECK(ident.member_pair(gl, y, x, z) == gl.dpi(y, x, z));
            }

    auto floor_big = perturb_distances(gl, PerturbedDistances::Scheme::Floor, rr(1000));
    for (int y = 0; y < gl.count(); ++y)
        for (int x = 0; x < gl.count(); ++x)
            for (int z = x + 1; z < gl.count(); ++z) {
                if (x == y || z == y) continue;
                CHECK(floor_big.member_pair(gl, y, x, z) == rr(0));
            }

    auto floor2 = perturb_distances(gl, PerturbedDistances::Scheme::Floor, rr(2));
    for (int y = 0; y < gl.count(); ++y)
        for (int x = 0; x < gl.count(); ++x)
            for (int z = x + 1; z < gl.count(); ++z) {
                if (x == y || z == y) continue;
                Rational diff = gl.dpi(y, x, z) - floor2.member_pair(gl, y, x, z);
                CHECK(diff >= rr(0));
                CHECK(diff <= rr(2));
            }

    CHECK_THROWS_AS(perturb_distances(gl, PerturbedDistances::Scheme::Floor, rr(-1)),
                    ParameterError);
}

TEST_CASE("build_qtms applies the attachment rule") {
    auto fam = two_member_family();
    verify_projection_axioms(fam);
    auto pert = perturb_distances(fam, PerturbedDistances::Scheme::Identity);
    auto qt = build_qtms(fam, pert, rr(2), rr(1));
    CHECK(qt.pair_edges[0][1] == 2); // |pi x pi| = 2*1, the vacuous condition always joins
    CHECK(qt.connected);

    auto tripod = tripod_lines(4);
    verify_projection_axioms(tripod);
    auto pt = perturb_distances(tripod, PerturbedDistances::Scheme::Identity);
    auto qtt = build_qtms(tripod, pt, rr(0), rr(1));
    for (int x = 0; x < 3; ++x)
        for (int y = x + 1; y < 3; ++y) CHECK(qtt.pair_edges[x][y] == 1);
    CHECK(qtt.connected);

    // chain: middle pairs blocked below the realized gap, neighbours joined
    auto gl = grid_lines(5, 3);
    verify_projection_axioms(gl);
    auto pg = perturb_distances(gl, PerturbedDistances::Scheme::Identity);
    auto qg = build_qtms(gl, pg, rr(1), rr(1));
    CHECK(qg.pair_edges[0][1] > 0);
    CHECK(qg.pair_edges[0][4] == 0);
    CHECK(qg.pair_edges[1][3] == 0);
    CHECK(qg.connected);

    CHECK_THROWS_AS(build_qtms(gl, pg, rr(-1), rr(1)), ParameterError);
}

TEST_CASE("distance_formula_check evaluates the three clauses") {
    auto gl = grid_lines(5, 3); // segments of length 9
    verify_projection_axioms(gl);
    auto pert = perturb_distances(gl, PerturbedDistances::Scheme::Identity);
    auto qt = build_qtms(gl, pert, rr(1), rr(1));

    std::vector<std::pair<MemberPoint, MemberPoint>> pairs = {
        {{0, 0}, {0, 0}},  // x = y
        {{0, 0}, {0, 5}},  // same member
        {{0, 0}, {4, 9}},  // across the whole chain
    };
    auto rows = distance_formula_check(qt, gl, pert, rr(2), pairs);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].d == rr(0));
    CHECK(rows[0].upper_ok);
    CHECK(rows[0].lower_ok);
    CHECK(rows[0].implication_ok);

    CHECK(rows[1].d <= rr(5));
    CHECK(rows[1].upper_ok);

    CHECK(rows[2].reachable);
    CHECK(rows[2].d > rr(6) * qt.K);
    CHECK(rows[2].implication_ok);
    CHECK(rows[2].witness_member >= 0);
    CHECK(rows[2].upper_ok);

    CHECK_THROWS_AS(distance_formula_check(qt, gl, pert, rr(2), {{{ 0, 0 }, { 9, 0 }}}),
                    StructuralError);
}

TEST_CASE("relevant_set is totally ordered left to right on the chain") {
    auto gl = grid_lines(5, 3);
    verify_projection_axioms(gl);

    auto empty = relevant_set(gl, {0, 0}, {4, 9}, rr(1000));
    CHECK(empty.ordered.empty());

    auto rel = relevant_set(gl, {0, 0}, {4, 9}, rr(5));
    CHECK(rel.total);
    CHECK(rel.antisymmetric);
    CHECK(rel.transitive);
    CHECK(rel.ordered == std::vector<int>{0, 1, 2, 3, 4});

    // two long members, both relevant; the order is the single comparison
    ProjectionFamily fam;
    fam.members.push_back(GraphSpace::path(30));
    fam.members.push_back(GraphSpace::path(30));
    fam.proj.assign(2, std::vector<std::vector<int>>(2));
    fam.proj[1][0] = {2, 3};
    fam.proj[0][1] = {0};
    verify_projection_axioms(fam);
    auto r2 = relevant_set(fam, {0, 29}, {1, 29}, rr(20));
    CHECK(r2.total);
    CHECK(r2.antisymmetric);
    CHECK(r2.ordered == std::vector<int>{0, 1});
}

TEST_CASE("sweep identifies the empirical threshold") {
    auto gl = grid_lines(4, 3);
    verify_projection_axioms(gl);
    auto pert = perturb_distances(gl, PerturbedDistances::Scheme::Identity);
    std::vector<Rational> ks;
    for (int k = 1; k <= 12; k += 1) ks.push_back(rr(k));
    std::vector<std::pair<MemberPoint, MemberPoint>> pairs = {
        {{0, 0}, {3, 9}},
        {{0, 3}, {2, 4}},
        {{1, 0}, {3, 0}},
    };
    auto sweep = sweep_distance_formula(gl, pert, ks, rr(1), rr(2), pairs);
    REQUIRE(sweep.threshold.has_value());
    CHECK(sweep.rows.size() == ks.size() * pairs.size());

    // monotone stability: everything keeps passing above the threshold
    for (const auto& row : sweep.rows) {
        if (row.K >= *sweep.threshold) {
            CHECK(row.row.upper_ok);
            CHECK(row.row.implication_ok);
            CHECK(row.order_total);
        }
    }

    // a family with nonzero xi rejects K values below xi
    auto axes = tree_axes(GraphSpace::random_tree(60, 3), 4, 21);
    verify_projection_axioms(axes);
    if (axes.xi > rr(0)) {
        auto pa = perturb_distances(axes, PerturbedDistances::Scheme::Identity);
        CHECK_THROWS_AS(build_qtms(axes, pa, axes.xi - rr(1, 2), rr(1)), ParameterError);
    }
}
