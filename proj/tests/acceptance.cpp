// Acceptance suite: one pass/fail line per criterion, exact tolerances.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <queue>
#include <vector>

#include "cmg/coarse_median.hpp"
#include "cmg/cone.hpp"
#include "cmg/cover_trees.hpp"
#include "cmg/covers.hpp"
#include "cmg/experiment.hpp"
#include "cmg/hyperbolicity.hpp"
#include "cmg/io.hpp"
#include "cmg/median_graph.hpp"
#include "cmg/pipeline.hpp"
#include "cmg/projection.hpp"

using namespace cmg;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Criterion {
    const char* name;
    double budget_seconds;
    bool ok = true;
    std::vector<std::string> notes;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void finish() {
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budget_seconds > 0 && secs > budget_seconds) {
            ok = false;
            notes.push_back("runtime " + std::to_string(secs) + "s exceeds budget");
        }
        std::printf("%s %s (%.1fs)\n", ok ? "PASS" : "FAIL", name, secs);
        for (auto& n : notes) std::printf("     %s\n", n.c_str());
        if (!ok) ++failures;
    }
};

// independent shortest-path recomputation (binary-heap Dijkstra; the library
// itself uses plain BFS on unit graphs)
std::vector<std::int64_t> dijkstra_row(const GraphSpace& g, int src) {
    std::vector<std::int64_t> d(g.n(), -1);
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    d[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du != d[u]) continue;
        for (auto [v, e] : g.neighbors(u)) {
            std::int64_t nd = du + g.edge_ticks(e);
            if (d[v] < 0 || nd < d[v]) {
                d[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return d;
}

struct CoverBundle {
    std::string name;
    FiniteMetricSpace base;
    NetHierarchy nets;
    ConeGraph cone;
    ColouredCoverSequence covers;
    RootedForest forest;
    std::vector<ConeTreeMap> maps;
};

CoverBundle make_bundle(std::string name, const FiniteMetricSpace& base, const Rational& r,
                        int k_max, CoverStrategy strategy, std::uint64_t seed) {
    CoverBundle b;
    b.name = std::move(name);
    b.base = base;
    b.nets = build_nets(base, r, k_max, seed);
    b.cone = build_cone(b.nets);
    b.covers = build_covers(base, r, Rational(0), k_max, strategy);
    b.forest = build_trees(b.covers);
    for (int c = 0; c < b.forest.num_colours; ++c)
        b.maps.push_back(map_fc(b.cone, b.covers, b.forest, c));
    return b;
}

std::vector<CoverBundle> standard_corpus() {
    std::vector<CoverBundle> out;
    auto u64 = tree_boundary_instance(6, 2, Rational(1, 8), 11, 5);
    out.push_back(make_bundle("ultrametric64", u64.boundary, Rational(1, 8), 5,
                              CoverStrategy::Ultrametric, 11));
    auto u16 = tree_boundary_instance(4, 2, Rational(1, 8), 9, 4);
    out.push_back(make_bundle("ultrametric16", u16.boundary, Rational(1, 8), 4,
                              CoverStrategy::Ultrametric, 9));
    auto mixed = tree_boundary_instance(6, 2, Rational(1, 8), 13, 4, Rational(1, 3));
    out.push_back(make_bundle("ultrametric-ratio3", mixed.boundary, Rational(1, 8), 4,
                              CoverStrategy::Ultrametric, 13));
    out.push_back(make_bundle("line33", line_points_instance(33), Rational(1, 32), 4,
                              CoverStrategy::LineDyadic, 5));
    out.push_back(make_bundle("grid33", grid_points_instance(33, 33), Rational(1, 32), 2,
                              CoverStrategy::Grid, 5));
    return out;
}

void criterion_exact_lemmas() {
    Criterion c{"criterion 1: exact lemma suite", 60.0};

    auto corpus = standard_corpus();
    for (auto& b : corpus) {
        // factor maps contract cone edges into tree steps of length <= 2
        for (int col = 0; col < b.forest.num_colours; ++col) {
            const auto& tf = b.forest.trees[col];
            for (const auto& e : b.cone.g.edges())
                c.require(tf.dist(b.maps[col].node_of[e.u], b.maps[col].node_of[e.v]) <= 2,
                          b.name + ": 2-Lipschitz fails on a cone edge");
        }
        // shadow sets: nonempty, cone-diameter <= 2, images on the root path
        for (int e = 0; e < (int)b.covers.elements.size(); ++e) {
            int col = b.covers.elements[e].colour;
            auto rep = uhat(b.covers, b.nets, b.cone, b.forest, b.maps[col], e);
            c.require(rep.nonempty, b.name + ": empty shadow set");
            c.require(rep.diameter_ok, b.name + ": shadow diameter > 2");
            c.require(rep.images_on_root_path, b.name + ": image leaves the root path");
            c.require(rep.images_within_two, b.name + ": image further than 2 from the element");
        }
        // cover conditions including the net-ball containment
        auto rep = verify_cover_conditions(b.covers, b.nets);
        c.require(rep.all_ok(), b.name + ": cover conditions fail");
        // monotone images along descending paths
        for (int col = 0; col < b.forest.num_colours; ++col) {
            std::string w;
            c.require(check_monotone_images(b.cone, b.forest, b.maps[col], &w), b.name + ": " + w);
        }
    }

    // projection axioms at the stored xi, and the perturbation inequality
    {
        std::vector<ProjectionFamily> fams;
        fams.push_back(tripod_lines(5));
        fams.push_back(grid_lines(5, 3));
        fams.push_back(tree_axes(GraphSpace::random_tree(60, 3), 4, 21));
        for (auto& fam : fams) {
            auto v = verify_projection_axioms(fam);
            c.require(v.ok, "projection axioms unverifiable");
            for (int y = 0; y < fam.count() && v.ok; ++y)
                for (int x = 0; x < fam.count(); ++x) {
                    if (x == y) continue;
                    c.require(fam.set_diameter(y, fam.proj[y][x]) <= fam.xi, "(P0) fails at xi");
                    for (int z = 0; z < fam.count(); ++z) {
                        if (z == x || z == y || x >= z) continue;
                        if (fam.dpi(y, x, z) > fam.xi) {
                            c.require(fam.dpi(x, z, y) <= fam.xi, "(P1) fails at xi");
                            c.require(fam.dpi(z, x, y) <= fam.xi, "(P1) fails at xi");
                        }
                    }
                }
            for (auto scheme : {PerturbedDistances::Scheme::Identity, PerturbedDistances::Scheme::Floor}) {
                auto pert = perturb_distances(fam, scheme, Rational(2));
                for (int y = 0; y < fam.count(); ++y)
                    for (int x = 0; x < fam.count(); ++x)
                        for (int z = x + 1; z < fam.count(); ++z) {
                            if (x == y || z == y) continue;
                            Rational dp = fam.dpi(y, x, z);
                            Rational df = pert.member_pair(fam, y, x, z);
                            c.require(dp - pert.delta <= df && df <= dp,
                                      "perturbation inequality fails");
                        }
            }
        }
    }

    // median-graph suite against independent oracles
    {
        auto big = MedianGraph::verify(GraphSpace::grid(40, 50)); // 2000 vertices
        c.require(big.ok(), "40x50 grid failed median verification");
        const MedianGraph& q = *big.graph;
        // metric vs independent Dijkstra
        for (int src : {0, 777, 1999}) {
            auto row = dijkstra_row(q.space(), src);
            for (int v = 0; v < q.n(); ++v)
                c.require(row[v] == q.space().dist_ticks(src, v), "metric recomputation mismatch");
        }
        // median uniqueness on sampled triples
        Rng rng(31);
        for (int s = 0; s < 1500; ++s) {
            int x = (int)rng.below(q.n()), y = (int)rng.below(q.n()), z = (int)rng.below(q.n());
            int count = 0;
            for (int v = 0; v < q.n(); ++v)
                if (q.in_interval(v, x, y) && q.in_interval(v, y, z) && q.in_interval(v, x, z))
                    ++count;
            c.require(count == 1, "median uniqueness fails");
        }
        // hyperplane count equals distance
        const auto& hs = q.hyperplanes();
        for (int s = 0; s < 4000; ++s) {
            int x = (int)rng.below(q.n()), y = (int)rng.below(q.n());
            int sep = 0;
            for (const auto& h : hs)
                if (h.separates(x, y)) ++sep;
            c.require(q.space().dist_ticks(x, y) == sep, "separator count != distance");
        }

        auto mid = MedianGraph::verify(GraphSpace::grid(20, 30));
        const MedianGraph& m = *mid.graph;
        auto hull = m.convex_hull({0, m.n() - 1});
        c.require((int)hull.vertices.size() == m.n(), "corner hull misses vertices");
        c.require(hull.iterations <= m.dimension().first, "hull used too many iterations");

        auto prod = box_product({GraphSpace::random_tree(5, 2), GraphSpace::random_tree(6, 3),
                                 GraphSpace::random_tree(7, 4)});
        auto h2 = prod.graph.convex_hull({0, prod.graph.n() - 1, 17});
        c.require(h2.iterations <= prod.graph.dimension().first,
                  "product hull used too many iterations");

        // gate minimality over whole corpus of (C, x)
        std::vector<std::vector<int>> convex_sets = {
            m.convex_hull({0, 9}).vertices,
            m.convex_hull({35, 599}).vertices,
            m.hyperplanes()[3].side_a.to_vector(),
        };
        for (auto& cs : convex_sets) {
            auto sub = m.convex_subgraph(cs);
            for (int x = 0; x < m.n(); x += 7) {
                int gx = m.gate(sub, x);
                for (int y : cs)
                    c.require(m.space().dist_ticks(x, gx) <= m.space().dist_ticks(x, y),
                              "gate not nearest");
            }
        }

        // Helly on pairwise-intersecting convex families
        const auto& ph = prod.graph.hyperplanes();
        std::vector<ConvexSubgraph> fam;
        for (int i = 0; i < (int)ph.size() && (int)fam.size() < 3; ++i) {
            auto side = ph[i].side_a.test(0) ? ph[i].side_a : ph[i].side_b;
            fam.push_back(prod.graph.convex_subgraph(side.to_vector()));
        }
        auto helly = prod.graph.helly_check(fam);
        c.require(helly.all_intersect && helly.common_vertex >= 0, "Helly misses a common vertex");
        // independent scan: the returned vertex lies in every member, and a
        // direct search over all vertices agrees that one exists
        int brute = -1;
        for (int v = 0; v < prod.graph.n() && brute < 0; ++v) {
            bool in_all = true;
            for (auto& cs : fam)
                if (std::find(cs.vertices.begin(), cs.vertices.end(), v) == cs.vertices.end())
                    in_all = false;
            if (in_all) brute = v;
        }
        c.require(brute >= 0, "brute-force scan finds no common vertex");
        for (auto& cs : fam)
            c.require(std::find(cs.vertices.begin(), cs.vertices.end(), helly.common_vertex) !=
                          cs.vertices.end(),
                      "returned vertex escapes a family member");
    }

    c.finish();
}

void criterion_hyperbolicity_stability() {
    Criterion c{"criterion 2: hyperbolicity stability", 120.0};
    for (auto ratio : {Rational(1, 8), Rational(1, 3)}) {
        std::vector<Rational> deltas;
        for (int kmax = 4; kmax <= 6; ++kmax) {
            auto inst = tree_boundary_instance(6, 2, Rational(1, 8), 11, kmax, ratio);
            deltas.push_back(four_point_delta(inst.cone.g));
        }
        for (size_t i = 0; i + 1 < deltas.size(); ++i)
            c.require((deltas[i + 1] - deltas[i]).abs() <= Rational(1),
                      "delta step exceeds 1 at ratio " + ratio.str());
        c.require((deltas.back() - deltas.front()).abs() <= Rational(1),
                  "delta drift from k=4 to k=6 exceeds 1 at ratio " + ratio.str());
    }
    c.finish();
}

void criterion_embedding_quality() {
    Criterion c{"criterion 3: embedding quality", 120.0};
    auto inst = tree_boundary_instance(6, 2, Rational(1, 8), 11, 5);
    auto covers =
        build_covers(inst.boundary, Rational(1, 8), Rational(0), 5, CoverStrategy::Ultrametric);
    auto forest = build_trees(covers);
    auto emb = embed_product(inst.cone, forest, {map_fc(inst.cone, covers, forest, 0)});
    int trees = forest.num_colours;
    size_t cone_triples =
        (size_t)inst.cone.g.n() * (inst.cone.g.n() - 1) * (inst.cone.g.n() - 2) / 6;
    c.require(emb.triples_scanned == cone_triples, "triples were sampled, not exhaustive");
    c.require(emb.qi.feasible, "no feasible distortion pair in the grid");
    c.require(emb.qi.lambda <= Rational(4), "lambda exceeds 4: " + emb.qi.lambda.str());
    c.require(emb.qi.eps <= Rational(8) * Rational(trees), "eps exceeds 8*trees: " + emb.qi.eps.str());
    c.require(emb.qm_defect <= Rational(6), "quasimedian defect exceeds 6: " + emb.qm_defect.str());
    // regression pins frozen from the first verified build
    c.require(emb.qi.lambda == Rational(4), "lambda regression: " + emb.qi.lambda.str());
    c.require(emb.qi.eps == Rational(1, 2), "eps regression: " + emb.qi.eps.str());
    c.require(emb.qm_defect == Rational(1), "defect regression: " + emb.qm_defect.str());
    c.finish();
}

void criterion_distance_formula() {
    Criterion c{"criterion 4: distance formula sweep", 120.0};
    for (int n : {4, 5}) {
        auto fam = grid_lines(n, 3);
        auto v = verify_projection_axioms(fam);
        c.require(v.ok, "chain family unverifiable");
        auto pert = perturb_distances(fam, PerturbedDistances::Scheme::Identity);
        std::vector<Rational> ks;
        for (int k = 1; k <= 12; ++k) ks.push_back(Rational(k));
        std::vector<std::pair<MemberPoint, MemberPoint>> pairs;
        int seg = 3 * 3;
        pairs.push_back({{0, 0}, {n - 1, seg}});
        pairs.push_back({{0, seg / 2}, {n - 2, seg / 2}});
        pairs.push_back({{1, 0}, {n - 1, 0}});
        pairs.push_back({{0, 1}, {0, seg}});
        auto sweep = sweep_distance_formula(fam, pert, ks, Rational(1), Rational(2), pairs);
        c.require(sweep.threshold.has_value(), "no stable K threshold found");
        if (sweep.threshold) {
            for (const auto& row : sweep.rows)
                if (row.K >= *sweep.threshold) {
                    c.require(row.row.upper_ok, "upper bound fails above the threshold");
                    c.require(row.row.implication_ok, "implication fails above the threshold");
                    c.require(row.order_total, "relevant order not total above the threshold");
                }
        }
    }
    c.finish();
}

void criterion_cubulation_roundtrip() {
    Criterion c{"criterion 5: cubulation round-trip", 300.0};

    // corpus entry 1: a tree in itself
    GraphSpace tree = GraphSpace::random_tree(40, 13);
    auto bp = box_product({tree});
    auto amb_tree = ambient_from(bp.graph);
    std::vector<std::int64_t> ident(tree.n());
    for (int v = 0; v < tree.n(); ++v) ident[v] = v;

    // corpus entries 2-4: cones through the cover pipeline
    std::vector<std::pair<std::string, CoverBundle>> bundles;
    {
        auto z2 = tree_boundary_instance(1, 2, Rational(1, 8), 3, 2);
        bundles.push_back({"two-point", make_bundle("two-point", z2.boundary, Rational(1, 8), 2,
                                                    CoverStrategy::Ultrametric, 3)});
        auto u64 = tree_boundary_instance(6, 2, Rational(1, 8), 11, 5);
        bundles.push_back({"ultrametric64", make_bundle("ultrametric64", u64.boundary,
                                                        Rational(1, 8), 5,
                                                        CoverStrategy::Ultrametric, 11)});
        bundles.push_back({"line33", make_bundle("line33", line_points_instance(33), Rational(1, 32),
                                                 3, CoverStrategy::LineDyadic, 5)});
    }

    {
        MedianFn tm = [&tree](int a, int b, int cc) { return tree_median(tree, a, b, cc); };
        auto cub = cubulate(tree, tm, amb_tree, ident);
        c.require(cub.qm_defect == Rational(0), "tree self-cubulation has nonzero defect");
        c.require(cub.qi.lambda == Rational(1) && cub.qi.eps == Rational(0),
                  "tree self-cubulation distorts");

    }

    std::vector<EmbedResult> embeds;
    embeds.reserve(bundles.size());
    for (auto& [name, b] : bundles) {
        embeds.push_back(embed_product(b.cone, b.forest, b.maps));
        auto ambient = ambient_from(embeds.back().product);
        MedianFn med = [&g = b.cone.g](int x, int y, int z) { return coarse_median(g, x, y, z); };
        auto cub = cubulate(b.cone.g, med, ambient, embeds.back().image);
        c.require(!cub.hull.empty(), name + ": empty hull");

        // second pass: the hull with the identity embedding is a fixpoint
        auto hull_graph = induced_graph(ambient, cub.hull);
        auto ver = MedianGraph::verify(hull_graph);
        c.require(ver.ok(), name + ": hull graph is not median");
        if (ver.ok()) {
            auto amb2 = ambient_from(*ver.graph);
            std::vector<std::int64_t> id2(hull_graph.n());
            for (int v = 0; v < hull_graph.n(); ++v) id2[v] = v;
            MedianFn med2 = [&q = *ver.graph](int x, int y, int z) { return q.median(x, y, z); };
            auto cub2 = cubulate(hull_graph, med2, amb2, id2);
            c.require(cub2.closure.size() == cub.hull.size(),
                      name + ": second pass does not return the full 0-skeleton");
            c.require(cub2.qm_defect == Rational(0), name + ": second pass defect nonzero");
            c.require(cub2.qi.lambda == Rational(1) && cub2.qi.eps == Rational(0),
                      name + ": second pass distorts");
        }

    }

    // convexity round-trip: every corpus convex subcomplex pulls back to a
    // k0-median-quasiconvex subset at its measured constant
    for (size_t bi = 0; bi < bundles.size(); ++bi) {
        auto& b = bundles[bi].second;
        auto ambient = ambient_from(embeds[bi].product);
        MedianFn med = [&g = b.cone.g](int x, int y, int z) { return coarse_median(g, x, y, z); };
        auto cub = cubulate(b.cone.g, med, ambient, embeds[bi].image);
        Rational displacement = gating_displacement(cub, ambient);

        std::vector<std::vector<int>> subsets;
        std::vector<int> all(b.cone.g.n());
        for (int v = 0; v < b.cone.g.n(); ++v) all[v] = v;
        subsets.push_back(all);
        subsets.push_back({0});
        subsets.push_back(b.cone.g.geodesic(0, b.cone.g.n() - 1));
        for (auto& y : subsets) {
            Rational k = median_quasiconvexity_constant(b.cone.g, med, y);
            auto res = convexity_correspondence(b.cone.g, med, cub, ambient, y, k);
            c.require(!res.preimage.empty(), bundles[bi].first + ": empty pull-back");
            Rational measured = median_quasiconvexity_constant(b.cone.g, med, res.preimage);
            c.require(measured == res.k0_reverse, bundles[bi].first + ": reported k0 mismatch");
            if (y.size() == all.size())
                c.require(res.hausdorff <= cub.qm_defect + displacement + Rational(2),
                          bundles[bi].first + ": image-hull hausdorff above the measured bound");
        }
    }

    c.finish();
}

void criterion_reproducibility() {
    Criterion c{"criterion 6: reproducibility", 120.0};
    fs::path base = fs::temp_directory_path() / "cmg_acceptance_repro";
    fs::remove_all(base);

    for (auto [gen, strategy] :
         std::vector<std::pair<std::string, std::string>>{{"tree_boundary", "ultrametric"},
                                                          {"line_points", "line_dyadic"}}) {
        ExperimentConfig cfg;
        cfg.generator = gen;
        cfg.depth = 1;
        cfg.branching = 2;
        cfg.count = 33;
        cfg.r = gen == "line_points" ? Rational(1, 32) : Rational(1, 8);
        cfg.k_max = gen == "line_points" ? 3 : 2;
        cfg.strategy = strategy;
        cfg.stages = {"cone", "covers", "trees", "embed", "cubulate"};
        cfg.seed = 5;
        cfg.seed_given = true;

        cfg.out_dir = (base / (gen + "_a")).string();
        auto b1 = run_experiment(cfg);
        cfg.out_dir = (base / (gen + "_b")).string();
        auto b2 = run_experiment(cfg);
        c.require(!b1.failed && !b2.failed, gen + ": run failed");
        c.require(b1.artifacts.size() == b2.artifacts.size(), gen + ": artifact count differs");
        for (size_t i = 0; i < std::min(b1.artifacts.size(), b2.artifacts.size()); ++i)
            c.require(slurp(b1.artifacts[i]) == slurp(b2.artifacts[i]),
                      gen + ": artifact bytes differ: " + b1.artifacts[i]);
        c.require(slurp(b1.summary_path) == slurp(b2.summary_path), gen + ": summary differs");
    }
    c.finish();
}

} // namespace

int main() {
    criterion_exact_lemmas();
    criterion_hyperbolicity_stability();
    criterion_embedding_quality();
    criterion_distance_formula();
    criterion_cubulation_roundtrip();
    criterion_reproducibility();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
