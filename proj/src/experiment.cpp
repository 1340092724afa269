#include "cmg/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <set>

#include "cmg/coarse_median.hpp"
#include "cmg/cone.hpp"
#include "cmg/cover_trees.hpp"
#include "cmg/covers.hpp"
#include "cmg/errors.hpp"
#include "cmg/hyperbolicity.hpp"
#include "cmg/io.hpp"
#include "cmg/pipeline.hpp"
#include "json.hpp"

namespace cmg {

using nlohmann::json;
namespace fs = std::filesystem;

FiniteMetricSpace line_points_instance(int count) {
    if (count < 2) throw ParameterError("line_points: need at least two points");
    FiniteMetricSpace m;
    for (int i = 0; i < count; ++i) m.points.push_back("p" + std::to_string(i));
    m.dist.assign((size_t)count * count, Rational(0));
    // evenly spaced, diameter exactly 1/2
    Rational step = Rational(1, 2) / Rational(count - 1);
    for (int i = 0; i < count; ++i) {
        m.coords.push_back({step * Rational(i)});
        for (int j = 0; j < count; ++j) m.d(i, j) = step * Rational(std::abs(i - j));
    }
    return m;
}

FiniteMetricSpace grid_points_instance(int nx, int ny) {
    if (nx < 2 || ny < 2) throw ParameterError("grid_points: need at least 2x2");
    FiniteMetricSpace m;
    int n = nx * ny;
    // l1 diameter exactly 1/2
    Rational step = Rational(1, 2) / Rational(nx - 1 + ny - 1);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            m.points.push_back("g" + std::to_string(x) + "_" + std::to_string(y));
            m.coords.push_back({step * Rational(x), step * Rational(y)});
        }
    m.dist.assign((size_t)n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Rational dx = (m.coords[a][0] - m.coords[b][0]).abs();
            Rational dy = (m.coords[a][1] - m.coords[b][1]).abs();
            m.d(a, b) = dx + dy;
        }
    return m;
}

static const std::set<std::string> kKnownStages = {"cone", "covers", "trees", "embed", "cubulate"};
static const std::set<std::string> kKnownGenerators = {"tree_boundary", "line_points", "grid_points",
                                                       "file"};

ExperimentConfig parse_experiment_config(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    if (!j.contains("instance")) throw ParameterError("config: missing instance");
    const auto& inst = j["instance"];
    if (inst.contains("file")) {
        cfg.generator = "file";
        cfg.input_file = inst["file"].get<std::string>();
    } else {
        cfg.generator = inst.value("generator", "");
        if (!kKnownGenerators.count(cfg.generator))
            throw ParameterError("config: unknown generator '" + cfg.generator + "'");
        cfg.depth = inst.value("depth", cfg.depth);
        cfg.branching = inst.value("branching", cfg.branching);
        cfg.count = inst.value("count", cfg.count);
        cfg.nx = inst.value("nx", cfg.nx);
        cfg.ny = inst.value("ny", cfg.ny);
        if (inst.contains("distance_ratio"))
            cfg.distance_ratio = Rational::parse(inst["distance_ratio"].get<std::string>());
    }
    if (j.contains("r")) cfg.r = Rational::parse(j["r"].get<std::string>());
    if (j.contains("eps")) cfg.eps = Rational::parse(j["eps"].get<std::string>());
    cfg.k_max = j.value("k_max", cfg.k_max);
    cfg.strategy = j.value("strategy", cfg.strategy);
    cover_strategy_from_string(cfg.strategy);
    if (j.contains("stages"))
        for (auto& s : j["stages"]) {
            std::string name = s.get<std::string>();
            if (!kKnownStages.count(name)) throw ParameterError("config: unknown stage '" + name + "'");
            cfg.stages.push_back(name);
        }
    if (j.contains("seed")) {
        cfg.seed = j["seed"].get<std::uint64_t>();
        cfg.seed_given = true;
    }
    if (!cfg.seed_given) throw ParameterError("config: seed is mandatory");
    if (j.contains("caps")) {
        cfg.product_cap = j["caps"].value("product_vertices", cfg.product_cap);
        cfg.closure_cap = j["caps"].value("closure_vertices", cfg.closure_cap);
        if (cfg.product_cap == 0 || cfg.closure_cap == 0)
            throw ParameterError("config: caps must be positive");
    }
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(slurp(path));
}

ExperimentBundle run_experiment(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(cfg.out_dir);
    auto out = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };

    ExperimentBundle bundle;
    ReportCsv summary;
    json manifest;
    manifest["config"]["generator"] = cfg.generator;
    manifest["config"]["r"] = cfg.r.str();
    manifest["config"]["eps"] = cfg.eps.str();
    manifest["config"]["k_max"] = cfg.k_max;
    manifest["config"]["strategy"] = cfg.strategy;
    manifest["config"]["stages"] = cfg.stages;
    manifest["config"]["seed"] = cfg.seed;
    manifest["version"] = 1;

    std::string iname = cfg.generator;
    FiniteMetricSpace base;
    std::optional<TreeBoundaryInstance> tb;

    std::optional<NetHierarchy> nets;
    std::optional<ConeGraph> cone;
    std::optional<ColouredCoverSequence> covers;
    std::optional<RootedForest> forest;
    std::vector<ConeTreeMap> fc_maps;
    std::optional<EmbedResult> embed;

    auto persist_manifest = [&]() {
        auto t1 = std::chrono::steady_clock::now();
        manifest["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        manifest["artifacts"] = bundle.artifacts;
        manifest["failed"] = bundle.failed;
        if (bundle.failed) {
            manifest["failed_stage"] = bundle.failed_stage;
            manifest["witness"] = bundle.failure_witness;
        }
        bundle.manifest_path = out("manifest.json");
        spit(bundle.manifest_path, manifest.dump(2) + "\n");
        bundle.summary_path = out("summary.csv");
        summary.save(bundle.summary_path);
    };

    std::string current_stage = "instance";
    try {
        if (cfg.generator == "file") {
            base = rescale(read_metric_auto(cfg.input_file));
            iname = cfg.input_file;
        } else if (cfg.generator == "line_points") {
            base = line_points_instance(cfg.count);
            iname = "line" + std::to_string(cfg.count);
        } else if (cfg.generator == "grid_points") {
            base = grid_points_instance(cfg.nx, cfg.ny);
            iname = "grid" + std::to_string(cfg.nx) + "x" + std::to_string(cfg.ny);
        } else if (cfg.generator == "tree_boundary") {
            tb = tree_boundary_instance(cfg.depth, cfg.branching, cfg.r, cfg.seed, cfg.k_max,
                                        cfg.distance_ratio);
            base = tb->boundary;
            iname = "tree_d" + std::to_string(cfg.depth) + "b" + std::to_string(cfg.branching);
        }

        for (const auto& stage : cfg.stages) {
            current_stage = stage;
            if (stage == "cone") {
                nets = build_nets(base, cfg.r, cfg.k_max, cfg.seed);
                cone = build_cone(*nets);
                write_nets_json(*nets, out("nets.json"));
                write_cone_csv(*cone, out("cone_vertices.csv"), out("cone_edges.csv"));
                bundle.artifacts.insert(bundle.artifacts.end(),
                                        {out("nets.json"), out("cone_vertices.csv"), out("cone_edges.csv")});
                summary.add("cone_vertices", iname, std::to_string(cone->g.n()));
                summary.add("cone_edges", iname, std::to_string(cone->g.edges().size()));
                summary.add("four_point_delta", iname, four_point_delta(cone->g).str());
            } else if (stage == "covers") {
                if (!nets) throw StructuralError("stage covers: run cone first");
                covers = build_covers(base, cfg.r, cfg.eps, cfg.k_max,
                                      cover_strategy_from_string(cfg.strategy));
                auto rep = verify_cover_conditions(*covers, *nets);
                if (!rep.all_ok())
                    throw BuildError("cover conditions failed: " +
                                     (rep.witnesses.empty() ? "?" : rep.witnesses.front()));
                write_covers_json(*covers, out("covers.json"));
                bundle.artifacts.push_back(out("covers.json"));
                summary.add("cover_elements", iname, std::to_string(covers->elements.size()));
                summary.add("cover_colours", iname, std::to_string(covers->num_colours));
                summary.add("cover_eps", iname, covers->eps.str());
            } else if (stage == "trees") {
                if (!covers) throw StructuralError("stage trees: run covers first");
                forest = build_trees(*covers);
                for (int c = 0; c < forest->num_colours; ++c) {
                    std::string p = out("forest_c" + std::to_string(c) + ".csv");
                    write_forest_csv(*forest, *covers, c, p);
                    bundle.artifacts.push_back(p);
                    summary.add("tree_nodes_c" + std::to_string(c), iname,
                                std::to_string(forest->trees[c].n()));
                }
            } else if (stage == "embed") {
                if (!covers) throw StructuralError("stage embed: run covers first");
                if (!forest) forest = build_trees(*covers);
                fc_maps.clear();
                for (int c = 0; c < forest->num_colours; ++c)
                    fc_maps.push_back(map_fc(*cone, *covers, *forest, c));
                embed = embed_product(*cone, *forest, fc_maps);
                ReportCsv er;
                er.add("lambda", iname, embed->qi.lambda.str());
                er.add("eps", iname, embed->qi.eps.str());
                er.add("qm_defect", iname, embed->qm_defect.str());
                er.add("product_size", iname, std::to_string(embed->product.size));
                er.save(out("embed_report.csv"));
                bundle.artifacts.push_back(out("embed_report.csv"));
                summary.add("embed_lambda", iname, embed->qi.lambda.str());
                summary.add("embed_eps", iname, embed->qi.eps.str());
                summary.add("embed_defect", iname, embed->qm_defect.str());
            } else if (stage == "cubulate") {
                if (!embed) throw StructuralError("stage cubulate: run embed first");
                if ((size_t)embed->product.size > cfg.product_cap)
                    throw ResourceError("stage cubulate: product exceeds the configured cap");
                auto ambient = ambient_from(embed->product, cfg.product_cap);
                auto cub = cubulate(
                    cone->g, [&](int a, int b, int c) { return coarse_median(cone->g, a, b, c); },
                    ambient, embed->image, cfg.closure_cap, cfg.seed);
                ReportCsv cr;
                cr.add("closure_size", iname, std::to_string(cub.closure.size()));
                cr.add("closure_connected", iname, cub.closure_connected ? "1" : "0");
                cr.add("hull_size", iname, std::to_string(cub.hull.size()));
                cr.add("lambda", iname, cub.qi.lambda.str());
                cr.add("eps", iname, cub.qi.eps.str());
                cr.add("qm_defect", iname, cub.qm_defect.str());
                cr.add("hausdorff_image_closure", iname, cub.hausdorff_image_closure.str());
                cr.save(out("cubulate_report.csv"));
                bundle.artifacts.push_back(out("cubulate_report.csv"));
                summary.add("cubulate_closure", iname, std::to_string(cub.closure.size()));
                summary.add("cubulate_defect", iname, cub.qm_defect.str());
            }
        }
    } catch (const std::exception& e) {
        bundle.failed = true;
        bundle.failed_stage = current_stage;
        bundle.failure_witness = e.what();
        persist_manifest();
        return bundle;
    }
    persist_manifest();
    return bundle;
}

} // namespace cmg
