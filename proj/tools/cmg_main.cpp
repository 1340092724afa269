#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "cmg/coarse_median.hpp"
#include "cmg/cone.hpp"
#include "cmg/cover_trees.hpp"
#include "cmg/covers.hpp"
#include "cmg/errors.hpp"
#include "cmg/experiment.hpp"
#include "cmg/hyperbolicity.hpp"
#include "cmg/io.hpp"
#include "cmg/pipeline.hpp"
#include "cmg/projection.hpp"

using namespace cmg;
namespace fs = std::filesystem;

namespace {

struct InstanceOpts {
    std::string input;
    std::string gen;
    int depth = 3, branching = 2, count = 33, nx = 17, ny = 17;
    std::string r = "1/8";
    std::string distance_ratio;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_instance_flags(CLI::App* cmd, InstanceOpts& o) {
    cmd->add_option("--input", o.input, "metric space file (.json or .csv)");
    cmd->add_option("--gen", o.gen, "generator: tree_boundary | line_points | grid_points");
    cmd->add_option("--depth", o.depth);
    cmd->add_option("--branching", o.branching);
    cmd->add_option("--count", o.count);
    cmd->add_option("--nx", o.nx);
    cmd->add_option("--ny", o.ny);
    cmd->add_option("--r", o.r, "cone/cover parameter (rational)");
    cmd->add_option("--distance-ratio", o.distance_ratio, "boundary ultrametric ratio");
    cmd->add_option("--seed", o.seed, "mandatory for generators")->each([&](const std::string&) {
        o.seed_given = true;
    });
}

FiniteMetricSpace resolve_instance(const InstanceOpts& o, int k_max) {
    if (!o.input.empty()) return rescale(read_metric_auto(o.input));
    if (o.gen.empty()) throw ParameterError("pass --input FILE or --gen NAME");
    if (!o.seed_given) throw ParameterError("--seed is mandatory for generators");
    if (o.gen == "line_points") return line_points_instance(o.count);
    if (o.gen == "grid_points") return grid_points_instance(o.nx, o.ny);
    if (o.gen == "tree_boundary") {
        Rational ratio = o.distance_ratio.empty() ? Rational(0) : Rational::parse(o.distance_ratio);
        auto inst = tree_boundary_instance(o.depth, o.branching, Rational::parse(o.r), o.seed, k_max,
                                           ratio);
        return inst.boundary;
    }
    throw ParameterError("unknown generator: " + o.gen);
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

ProjectionFamily resolve_family(const std::string& family, int leg, int count, int spacing,
                                int seg_len, int tree_size, int lines, std::uint64_t seed) {
    if (family == "tripod") return tripod_lines(leg);
    if (family == "grid_lines") return grid_lines(count, spacing, seg_len);
    if (family == "tree_axes") return tree_axes(GraphSpace::random_tree(tree_size, seed), lines, seed);
    throw ParameterError("unknown family: " + family);
}

int run(int argc, char** argv) {
    CLI::App app{"coarse-median geometry engine"};
    app.require_subcommand(1);

    // metric check
    auto* metric = app.add_subcommand("metric", "metric space utilities");
    metric->require_subcommand(1);
    auto* mcheck = metric->add_subcommand("check", "validate a metric space file");
    std::string mfile, mreport;
    mcheck->add_option("file", mfile)->required();
    mcheck->add_option("--report", mreport, "write operation,instance,value rows");
    mcheck->callback([&]() {
        auto m = read_metric_auto(mfile);
        auto rep = check_metric(m);
        for (auto& v : rep.violations) std::cout << v.describe() << "\n";
        std::cout << (rep.ok() ? "valid" : "invalid") << " (" << m.n() << " points)\n";
        if (!mreport.empty()) {
            ReportCsv csv;
            csv.add("check_metric", mfile, rep.ok() ? "valid" : "invalid");
            csv.add("violations", mfile, std::to_string(rep.violations.size()));
            csv.save(mreport);
        }
        if (!rep.ok()) throw CLI::RuntimeError(1);
    });

    // shared pipeline options
    InstanceOpts io_cone, io_cov, io_covv, io_trees, io_embed, io_cub, io_cvx;
    int kmax_cone = 4, kmax_cov = 3, kmax_covv = 3, kmax_trees = 3, kmax_embed = 3, kmax_cub = 3,
        kmax_cvx = 3;
    std::string out_cone = "out", out_cov = "out", out_trees = "out", out_embed = "out",
                out_cub = "out", out_cvx = "out";
    std::string eps_cov, eps_covv, eps_trees, eps_embed, eps_cub, eps_cvx;
    std::string strat_cov = "ultrametric", strat_covv = "ultrametric", strat_trees = "ultrametric",
                strat_embed = "ultrametric", strat_cub = "ultrametric", strat_cvx = "ultrametric";

    auto* cone_cmd = app.add_subcommand("cone", "hyperbolic cone on a bounded space");
    cone_cmd->require_subcommand(1);
    auto* cone_build = cone_cmd->add_subcommand("build", "build nets and the cone graph");
    add_instance_flags(cone_build, io_cone);
    cone_build->add_option("--kmax", kmax_cone);
    cone_build->add_option("--out", out_cone);
    cone_build->callback([&]() {
        auto base = resolve_instance(io_cone, kmax_cone);
        auto nets = build_nets(base, Rational::parse(io_cone.r), kmax_cone, io_cone.seed);
        auto cone = build_cone(nets);
        write_nets_json(nets, out_path(out_cone, "nets.json"));
        write_cone_csv(cone, out_path(out_cone, "cone_vertices.csv"),
                       out_path(out_cone, "cone_edges.csv"));
        std::cout << "cone: " << cone.g.n() << " vertices, " << cone.g.edges().size()
                  << " edges, four_point_delta = " << four_point_delta(cone.g).str() << "\n";
    });

    auto make_cover_chain = [&](InstanceOpts& o, int k_max, const std::string& eps_s,
                                const std::string& strat) {
        auto base = resolve_instance(o, k_max);
        auto nets = build_nets(base, Rational::parse(o.r), k_max, o.seed);
        auto cone = build_cone(nets);
        Rational eps = eps_s.empty() ? Rational(0) : Rational::parse(eps_s);
        auto covers =
            build_covers(base, Rational::parse(o.r), eps, k_max, cover_strategy_from_string(strat));
        return std::tuple<FiniteMetricSpace, NetHierarchy, ConeGraph, ColouredCoverSequence>{
            std::move(base), std::move(nets), std::move(cone), std::move(covers)};
    };

    auto* covers_cmd = app.add_subcommand("covers", "coloured cover sequences");
    covers_cmd->require_subcommand(1);
    auto* covers_build = covers_cmd->add_subcommand("build", "build and export covers");
    add_instance_flags(covers_build, io_cov);
    covers_build->add_option("--kmax", kmax_cov);
    covers_build->add_option("--eps", eps_cov);
    covers_build->add_option("--strategy", strat_cov);
    covers_build->add_option("--out", out_cov);
    covers_build->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_cov, kmax_cov, eps_cov, strat_cov);
        write_covers_json(covers, out_path(out_cov, "covers.json"));
        std::cout << "covers: " << covers.elements.size() << " elements, "
                  << covers.num_colours << " colours, eps = " << covers.eps.str() << "\n";
    });
    auto* covers_verify = covers_cmd->add_subcommand("verify", "check every cover condition");
    add_instance_flags(covers_verify, io_covv);
    covers_verify->add_option("--kmax", kmax_covv);
    covers_verify->add_option("--eps", eps_covv);
    covers_verify->add_option("--strategy", strat_covv);
    covers_verify->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_covv, kmax_covv, eps_covv, strat_covv);
        auto rep = verify_cover_conditions(covers, nets);
        std::cout << "diameters " << (rep.c1_ok ? "ok" : "FAIL") << ", disjointness "
                  << (rep.disjoint_ok ? "ok" : "FAIL") << ", cover " << (rep.cover_ok ? "ok" : "FAIL")
                  << ", nesting " << (rep.c3_ok ? "ok" : "FAIL") << ", ball containment "
                  << (rep.c2_ok ? "ok" : "FAIL") << "\n";
        for (auto& w : rep.witnesses) std::cout << "  " << w << "\n";
        if (!rep.all_ok()) throw CLI::RuntimeError(1);
    });

    auto* trees_cmd = app.add_subcommand("trees", "containment trees of a cover sequence");
    trees_cmd->require_subcommand(1);
    auto* trees_build = trees_cmd->add_subcommand("build", "build and export the forest");
    add_instance_flags(trees_build, io_trees);
    trees_build->add_option("--kmax", kmax_trees);
    trees_build->add_option("--eps", eps_trees);
    trees_build->add_option("--strategy", strat_trees);
    trees_build->add_option("--out", out_trees);
    trees_build->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_trees, kmax_trees, eps_trees, strat_trees);
        auto forest = build_trees(covers);
        for (int c = 0; c < forest.num_colours; ++c) {
            write_forest_csv(forest, covers, c,
                             out_path(out_trees, "forest_c" + std::to_string(c) + ".csv"));
            std::cout << "tree " << c << ": " << forest.trees[c].n() << " nodes\n";
        }
    });

    auto* embed_cmd = app.add_subcommand("embed", "embed the cone in the product of colour trees");
    add_instance_flags(embed_cmd, io_embed);
    embed_cmd->add_option("--kmax", kmax_embed);
    embed_cmd->add_option("--eps", eps_embed);
    embed_cmd->add_option("--strategy", strat_embed);
    embed_cmd->add_option("--out", out_embed);
    embed_cmd->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_embed, kmax_embed, eps_embed, strat_embed);
        auto forest = build_trees(covers);
        std::vector<ConeTreeMap> maps;
        for (int c = 0; c < forest.num_colours; ++c) maps.push_back(map_fc(cone, covers, forest, c));
        auto emb = embed_product(cone, forest, maps);
        ReportCsv csv;
        csv.add("lambda", "embed", emb.qi.lambda.str());
        csv.add("eps", "embed", emb.qi.eps.str());
        csv.add("qm_defect", "embed", emb.qm_defect.str());
        csv.save(out_path(out_embed, "embed_report.csv"));
        std::cout << "lambda = " << emb.qi.lambda.str() << ", eps = " << emb.qi.eps.str()
                  << ", quasimedian defect = " << emb.qm_defect.str() << "\n";
    });

    // projection complexes
    std::string fam_name = "grid_lines";
    int fam_leg = 5, fam_count = 5, fam_spacing = 3, fam_seg = 0, fam_tree = 40, fam_lines = 4;
    std::uint64_t fam_seed = 0;
    bool fam_seed_given = false;
    std::string pcx_out = "out", pcx_K = "1", pcx_L = "1", pcx_scheme = "identity",
                pcx_delta = "0";
    int sweep_lo = 1, sweep_hi = 12, sweep_pairs = 6;

    auto* pcx = app.add_subcommand("pcx", "projection families and quasitrees");
    pcx->require_subcommand(1);
    auto add_family_flags = [&](CLI::App* cmd) {
        cmd->add_option("--family", fam_name, "tripod | grid_lines | tree_axes");
        cmd->add_option("--leg", fam_leg);
        cmd->add_option("--count", fam_count);
        cmd->add_option("--spacing", fam_spacing);
        cmd->add_option("--seg-len", fam_seg);
        cmd->add_option("--tree-size", fam_tree);
        cmd->add_option("--lines", fam_lines);
        cmd->add_option("--seed", fam_seed)->each([&](const std::string&) { fam_seed_given = true; });
    };
    auto get_family = [&]() {
        if (!fam_seed_given) throw ParameterError("--seed is mandatory for generators");
        auto fam = resolve_family(fam_name, fam_leg, fam_count, fam_spacing, fam_seg, fam_tree,
                                  fam_lines, fam_seed);
        auto v = verify_projection_axioms(fam);
        if (!v.ok) throw BuildError("projection axioms fail: " + v.what);
        return fam;
    };

    auto* pcx_verify = pcx->add_subcommand("verify", "verify (P0)/(P1) and report xi");
    add_family_flags(pcx_verify);
    pcx_verify->callback([&]() {
        auto fam = get_family();
        std::cout << "xi = " << fam.xi.str() << " (expected " << fam.expected_xi.str() << ")\n";
    });

    auto* pcx_build = pcx->add_subcommand("build", "assemble the quasitree");
    add_family_flags(pcx_build);
    pcx_build->add_option("--K", pcx_K);
    pcx_build->add_option("--L", pcx_L);
    pcx_build->add_option("--scheme", pcx_scheme, "identity | floor");
    pcx_build->add_option("--delta", pcx_delta);
    pcx_build->add_option("--out", pcx_out);
    pcx_build->callback([&]() {
        auto fam = get_family();
        auto pert = perturb_distances(fam,
                                      pcx_scheme == "floor" ? PerturbedDistances::Scheme::Floor
                                                            : PerturbedDistances::Scheme::Identity,
                                      Rational::parse(pcx_delta));
        auto qt = build_qtms(fam, pert, Rational::parse(pcx_K), Rational::parse(pcx_L));
        write_quasitree_csv(qt, out_path(pcx_out, "quasitree.csv"));
        std::cout << "quasitree: " << qt.g.n() << " vertices, " << qt.g.edges().size()
                  << " edges, connected = " << (qt.connected ? "yes" : "no") << "\n";
        for (int x = 0; x < fam.count(); ++x)
            for (int y = x + 1; y < fam.count(); ++y)
                if (qt.pair_edges[x][y])
                    std::cout << "  pair (" << x << "," << y << "): " << qt.pair_edges[x][y]
                              << " edges\n";
    });

    auto* pcx_sweep = pcx->add_subcommand("sweep", "K-grid distance-formula sweep");
    add_family_flags(pcx_sweep);
    pcx_sweep->add_option("--kmin", sweep_lo);
    pcx_sweep->add_option("--kmax", sweep_hi);
    pcx_sweep->add_option("--pairs", sweep_pairs);
    pcx_sweep->add_option("--out", pcx_out);
    pcx_sweep->callback([&]() {
        auto fam = get_family();
        auto pert = perturb_distances(fam, PerturbedDistances::Scheme::Identity);
        std::vector<Rational> ks;
        for (int k = sweep_lo; k <= sweep_hi; ++k) ks.push_back(Rational(k));
        std::vector<std::pair<MemberPoint, MemberPoint>> pairs;
        Rng rng(fam_seed ^ 0x5eedULL);
        for (int i = 0; i < sweep_pairs; ++i) {
            int mx = (int)rng.below(fam.count()), my = (int)rng.below(fam.count());
            pairs.push_back({{mx, (int)rng.below(fam.members[mx].n())},
                             {my, (int)rng.below(fam.members[my].n())}});
        }
        auto sweep = sweep_distance_formula(fam, pert, ks, Rational(1), Rational(2), pairs);
        write_sweep_csv(sweep, out_path(pcx_out, "sweep.csv"));
        if (sweep.threshold)
            std::cout << "threshold K = " << sweep.threshold->str() << "\n";
        else
            std::cout << "no K in the grid makes every clause pass\n";
    });

    auto* cub_cmd = app.add_subcommand("cubulate", "median closure and hull of the embedded cone");
    add_instance_flags(cub_cmd, io_cub);
    cub_cmd->add_option("--kmax", kmax_cub);
    cub_cmd->add_option("--eps", eps_cub);
    cub_cmd->add_option("--strategy", strat_cub);
    cub_cmd->add_option("--out", out_cub);
    cub_cmd->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_cub, kmax_cub, eps_cub, strat_cub);
        auto forest = build_trees(covers);
        std::vector<ConeTreeMap> maps;
        for (int c = 0; c < forest.num_colours; ++c) maps.push_back(map_fc(cone, covers, forest, c));
        auto emb = embed_product(cone, forest, maps);
        auto ambient = ambient_from(emb.product);
        auto cub = cubulate(
            cone.g, [&](int a, int b, int c) { return coarse_median(cone.g, a, b, c); }, ambient,
            emb.image, 60000, io_cub.seed);
        ReportCsv csv;
        csv.add("closure_size", "cubulate", std::to_string(cub.closure.size()));
        csv.add("closure_connected", "cubulate", cub.closure_connected ? "1" : "0");
        csv.add("hull_size", "cubulate", std::to_string(cub.hull.size()));
        csv.add("lambda", "cubulate", cub.qi.lambda.str());
        csv.add("eps", "cubulate", cub.qi.eps.str());
        csv.add("qm_defect", "cubulate", cub.qm_defect.str());
        csv.add("hausdorff_image_closure", "cubulate", cub.hausdorff_image_closure.str());
        csv.save(out_path(out_cub, "cubulate_report.csv"));
        if (cub.hull.size() <= 2000) {
            auto hull_graph = induced_graph(ambient, cub.hull);
            auto ver = MedianGraph::verify(hull_graph);
            if (ver.ok())
                write_median_graph_csv(*ver.graph, out_path(out_cub, "hull_edges.csv"),
                                       out_path(out_cub, "hull_hyperplanes.csv"));
        }
        std::cout << "closure " << cub.closure.size() << " (connected "
                  << (cub.closure_connected ? "yes" : "no") << "), hull " << cub.hull.size()
                  << ", lambda " << cub.qi.lambda.str() << ", eps " << cub.qi.eps.str()
                  << ", defect " << cub.qm_defect.str() << "\n";
    });

    std::string cvx_subset = "geodesic";
    std::string cvx_k = "0";
    auto* cvx_cmd = app.add_subcommand("convexity", "convex-subcomplex correspondence");
    add_instance_flags(cvx_cmd, io_cvx);
    cvx_cmd->add_option("--kmax", kmax_cvx);
    cvx_cmd->add_option("--eps", eps_cvx);
    cvx_cmd->add_option("--strategy", strat_cvx);
    cvx_cmd->add_option("--subset", cvx_subset, "geodesic | all | point:<v>");
    cvx_cmd->add_option("--k", cvx_k, "declared quasiconvexity constant");
    cvx_cmd->add_option("--out", out_cvx);
    cvx_cmd->callback([&]() {
        auto [base, nets, cone, covers] = make_cover_chain(io_cvx, kmax_cvx, eps_cvx, strat_cvx);
        auto forest = build_trees(covers);
        std::vector<ConeTreeMap> maps;
        for (int c = 0; c < forest.num_colours; ++c) maps.push_back(map_fc(cone, covers, forest, c));
        auto emb = embed_product(cone, forest, maps);
        auto ambient = ambient_from(emb.product);
        MedianFn med = [&](int a, int b, int c) { return coarse_median(cone.g, a, b, c); };
        auto cub = cubulate(cone.g, med, ambient, emb.image, 60000, io_cvx.seed);
        std::vector<int> subset;
        if (cvx_subset == "all")
            for (int v = 0; v < cone.g.n(); ++v) subset.push_back(v);
        else if (cvx_subset.rfind("point:", 0) == 0)
            subset.push_back(std::stoi(cvx_subset.substr(6)));
        else
            subset = cone.g.geodesic(0, cone.g.n() - 1);
        auto res = convexity_correspondence(cone.g, med, cub, ambient, subset,
                                            Rational::parse(cvx_k));
        std::cout << "Y' size " << res.y_prime.size() << ", hausdorff " << res.hausdorff.str()
                  << ", reverse k0 " << res.k0_reverse.str() << "\n";
    });

    int ap_rows = 4, ap_cols = 5;
    std::string ap_f1 = "0,7", ap_f2 = "0,8", ap_K = "1";
    auto* ap_cmd = app.add_subcommand("approx-sets", "hull comparison of two nearby finite sets");
    ap_cmd->add_option("--rows", ap_rows);
    ap_cmd->add_option("--cols", ap_cols);
    ap_cmd->add_option("--f1", ap_f1, "comma-separated vertex ids");
    ap_cmd->add_option("--f2", ap_f2);
    ap_cmd->add_option("--K", ap_K);
    ap_cmd->callback([&]() {
        auto ver = MedianGraph::verify(GraphSpace::grid(ap_rows, ap_cols));
        if (!ver.ok()) throw BuildError("grid failed median verification");
        auto parse_set = [](const std::string& s) {
            std::vector<int> out;
            std::istringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
            return out;
        };
        auto rep = approximate_finite_sets(*ver.graph, parse_set(ap_f1), parse_set(ap_f2),
                                           Rational::parse(ap_K));
        std::cout << "differing hyperplanes " << rep.differing_hyperplanes << ", gate isomorphism "
                  << (rep.gate_isomorphism ? "yes" : "no") << ", core hausdorff "
                  << rep.hausdorff_cores.str() << "\n";
    });

    std::string exp_cfg;
    auto* exp = app.add_subcommand("experiment", "seeded end-to-end runs");
    exp->require_subcommand(1);
    auto* exp_run = exp->add_subcommand("run", "execute a config file");
    exp_run->add_option("config", exp_cfg)->required();
    exp_run->callback([&]() {
        auto bundle = run_experiment(load_experiment_config(exp_cfg));
        std::cout << "artifacts:\n";
        for (auto& a : bundle.artifacts) std::cout << "  " << a << "\n";
        std::cout << "summary: " << bundle.summary_path << "\nmanifest: " << bundle.manifest_path
                  << "\n";
        if (bundle.failed) {
            std::cout << "FAILED at stage " << bundle.failed_stage << ": " << bundle.failure_witness
                      << "\n";
            throw CLI::RuntimeError(1);
        }
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
