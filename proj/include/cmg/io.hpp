#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmg/cone.hpp"
#include "cmg/cover_trees.hpp"
#include "cmg/covers.hpp"
#include "cmg/graph_space.hpp"
#include "cmg/median_graph.hpp"
#include "cmg/metric_space.hpp"
#include "cmg/projection.hpp"

namespace cmg {

// metric spaces: JSON {"points":[...],"dist":[[...]]} with rationals as
// "p/q" strings or numbers, or a bare CSV square matrix
FiniteMetricSpace read_metric_json(const std::string& path);
FiniteMetricSpace read_metric_csv(const std::string& path);
FiniteMetricSpace read_metric_auto(const std::string& path);
void write_metric_json(const FiniteMetricSpace& m, const std::string& path);

// graphs: CSV edge list "u,v,length" with string vertex ids
GraphSpace read_graph_csv(const std::string& path);
void write_graph_csv(const GraphSpace& g, const std::string& path);

void write_cone_csv(const ConeGraph& cone, const std::string& vertex_path,
                    const std::string& edge_path);
void write_nets_json(const NetHierarchy& nets, const std::string& path);
void write_covers_json(const ColouredCoverSequence& covers, const std::string& path);
void write_forest_csv(const RootedForest& forest, const ColouredCoverSequence& covers, int colour,
                      const std::string& path);
void write_quasitree_csv(const QuasiTree& qt, const std::string& path);
void write_sweep_csv(const SweepResult& sweep, const std::string& path);
void write_median_graph_csv(const MedianGraph& q, const std::string& edge_path,
                            const std::string& hyperplane_path);

/// Append-style "operation,instance,value" report.
struct ReportCsv {
    std::vector<std::array<std::string, 3>> rows;
    void add(const std::string& op, const std::string& instance, const std::string& value) {
        rows.push_back({op, instance, value});
    }
    void save(const std::string& path) const;
};

std::string slurp(const std::string& path);
void spit(const std::string& path, const std::string& content);

} // namespace cmg
