#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmg/metric_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Validated experiment description. Unknown generators or stages are
/// rejected at parse time, before any stage runs.
struct ExperimentConfig {
    std::string generator; // tree_boundary | line_points | grid_points | file
    std::string input_file;
    int depth = 3, branching = 2;
    int count = 33;       // line_points
    int nx = 9, ny = 9;   // grid_points
    Rational r{1, 8};
    Rational eps{0};      // 0 -> strategy default
    Rational distance_ratio{0};
    int k_max = 3;
    std::string strategy = "ultrametric";
    std::vector<std::string> stages;
    std::uint64_t seed = 0;
    bool seed_given = false;
    size_t product_cap = 100000;
    size_t closure_cap = 60000;
    std::string out_dir = "out";
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentBundle {
    bool failed = false;
    std::string failed_stage;
    std::string failure_witness;
    std::vector<std::string> artifacts;
    std::string manifest_path;
    std::string summary_path;
};

/// Runs the named stages in order, persisting every intermediate artifact,
/// a summary CSV, and a manifest. Stage failure marks the bundle failed and
/// preserves the witness. Byte-identical CSVs for identical seeds.
ExperimentBundle run_experiment(const ExperimentConfig& cfg);

/// Deterministic built-in instances shared by the CLI and the test corpus.
FiniteMetricSpace line_points_instance(int count);
FiniteMetricSpace grid_points_instance(int nx, int ny);

} // namespace cmg
