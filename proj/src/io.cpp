#include "cmg/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cmg/errors.hpp"
#include "json.hpp"

namespace cmg {

using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot write " + path);
    out << content;
}

static Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) {
        std::ostringstream ss;
        ss.precision(12);
        ss << std::fixed << j.get<double>();
        return Rational::parse(ss.str());
    }
    throw StructuralError("expected a rational value in JSON");
}

FiniteMetricSpace read_metric_json(const std::string& path) {
    json j = json::parse(slurp(path));
    FiniteMetricSpace m;
    if (!j.contains("points") || !j.contains("dist"))
        throw StructuralError(path + ": metric JSON needs points and dist");
    for (auto& p : j["points"]) m.points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    size_t n = m.points.size();
    if (j["dist"].size() != n) throw StructuralError(path + ": dist row count mismatch");
    for (auto& row : j["dist"]) {
        if (row.size() != n) throw StructuralError(path + ": dist column count mismatch");
        for (auto& v : row) m.dist.push_back(rational_from_json(v));
    }
    if (j.contains("inexact")) m.inexact = j["inexact"].get<bool>();
    if (j.contains("scale")) m.scale = rational_from_json(j["scale"]);
    if (j.contains("coords"))
        for (auto& row : j["coords"]) {
            std::vector<Rational> c;
            for (auto& v : row) c.push_back(rational_from_json(v));
            m.coords.push_back(std::move(c));
        }
    return m;
}

FiniteMetricSpace read_metric_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<std::vector<Rational>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Rational> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(Rational::parse(cell));
        rows.push_back(std::move(row));
    }
    FiniteMetricSpace m;
    size_t n = rows.size();
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw StructuralError(path + ": matrix is not square");
        m.points.push_back(std::to_string(i));
        for (auto& v : rows[i]) m.dist.push_back(v);
    }
    return m;
}

FiniteMetricSpace read_metric_auto(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return read_metric_json(path);
    return read_metric_csv(path);
}

void write_metric_json(const FiniteMetricSpace& m, const std::string& path) {
    json j;
    j["points"] = m.points;
    json dist = json::array();
    for (int i = 0; i < m.n(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.n(); ++k) row.push_back(m.d(i, k).str());
        dist.push_back(row);
    }
    j["dist"] = dist;
    j["scale"] = m.scale.str();
    j["inexact"] = m.inexact;
    if (!m.coords.empty()) {
        json coords = json::array();
        for (auto& c : m.coords) {
            json row = json::array();
            for (auto& v : c) row.push_back(v.str());
            coords.push_back(row);
        }
        j["coords"] = coords;
    }
    spit(path, j.dump(2) + "\n");
}

GraphSpace read_graph_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<std::string> labels;
    std::vector<GraphEdge> edges;
    std::unordered_map<std::string, int> index;
    auto vertex = [&](const std::string& id) {
        auto it = index.find(id);
        if (it != index.end()) return it->second;
        int v = (int)labels.size();
        index[id] = v;
        labels.push_back(id);
        return v;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string u, v, len;
        if (!std::getline(ls, u, ',') || !std::getline(ls, v, ','))
            throw StructuralError(path + ": bad edge line: " + line);
        if (!std::getline(ls, len, ',')) len = "1";
        edges.push_back({vertex(u), vertex(v), Rational::parse(len)});
    }
    if (labels.empty()) throw StructuralError(path + ": no edges");
    int n = (int)labels.size();
    return GraphSpace(n, std::move(edges), std::move(labels));
}

void write_graph_csv(const GraphSpace& g, const std::string& path) {
    std::ostringstream out;
    for (const auto& e : g.edges())
        out << g.label(e.u) << "," << g.label(e.v) << "," << e.len.str() << "\n";
    spit(path, out.str());
}

void write_cone_csv(const ConeGraph& cone, const std::string& vertex_path,
                    const std::string& edge_path) {
    std::ostringstream vs;
    vs << "vertex,level,base_point\n";
    for (int v = 0; v < cone.g.n(); ++v)
        vs << v << "," << cone.level[v] << "," << cone.base_point[v] << "\n";
    spit(vertex_path, vs.str());
    std::ostringstream es;
    es << "u,v\n";
    for (const auto& e : cone.g.edges()) es << e.u << "," << e.v << "\n";
    spit(edge_path, es.str());
}

void write_nets_json(const NetHierarchy& nets, const std::string& path) {
    json j;
    j["r"] = nets.r.str();
    j["k_max"] = nets.k_max;
    j["seed"] = nets.seed;
    json lv = json::array();
    for (auto& l : nets.levels) lv.push_back(l);
    j["levels"] = lv;
    j["points"] = nets.base.points;
    spit(path, j.dump(2) + "\n");
}

void write_covers_json(const ColouredCoverSequence& covers, const std::string& path) {
    json j;
    j["r"] = covers.r.str();
    j["eps"] = covers.eps.str();
    j["strategy"] = covers.strategy;
    j["colours"] = covers.num_colours;
    j["k_max"] = covers.k_max;
    json els = json::array();
    for (auto& el : covers.elements) {
        json e;
        e["colour"] = el.colour;
        e["level"] = el.level;
        e["scale"] = el.nominal_scale.str();
        e["points"] = el.points;
        els.push_back(e);
    }
    j["elements"] = els;
    spit(path, j.dump(2) + "\n");
}

void write_forest_csv(const RootedForest& forest, const ColouredCoverSequence& covers, int colour,
                      const std::string& path) {
    std::ostringstream out;
    out << "node,parent,level,element\n";
    const auto& tf = forest.trees[colour];
    for (int i = 0; i < tf.n(); ++i)
        out << i << "," << tf.parent[i] << ","
            << covers.elements[forest.node_element[colour][i]].level << ","
            << forest.node_element[colour][i] << "\n";
    spit(path, out.str());
}

void write_quasitree_csv(const QuasiTree& qt, const std::string& path) {
    std::ostringstream out;
    out << "u,v,length\n";
    for (const auto& e : qt.g.edges())
        out << qt.g.label(e.u) << "," << qt.g.label(e.v) << "," << e.len.str() << "\n";
    spit(path, out.str());
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::ostringstream out;
    out << "K,pair,d,sum_K,sum_Kprime,upper_ok,lower_ok,implication_ok,order_total,witness\n";
    for (const auto& r : sweep.rows)
        out << r.K.str() << "," << r.pair_index << "," << (r.row.reachable ? r.row.d.str() : "inf")
            << "," << r.row.sum_k.str() << "," << r.row.sum_kprime.str() << "," << r.row.upper_ok
            << "," << r.row.lower_ok << "," << r.row.implication_ok << "," << r.order_total << ","
            << r.row.witness_member << "\n";
    spit(path, out.str());
}

void write_median_graph_csv(const MedianGraph& q, const std::string& edge_path,
                            const std::string& hyperplane_path) {
    std::ostringstream es;
    es << "edge,u,v\n";
    for (int e = 0; e < (int)q.space().edges().size(); ++e)
        es << e << "," << q.space().edges()[e].u << "," << q.space().edges()[e].v << "\n";
    spit(edge_path, es.str());
    std::ostringstream hs;
    hs << "edge,hyperplane\n";
    const auto& hy = q.hyperplanes();
    for (int h = 0; h < (int)hy.size(); ++h)
        for (int e : hy[h].edge_ids) hs << e << "," << h << "\n";
    spit(hyperplane_path, hs.str());
}

void ReportCsv::save(const std::string& path) const {
    std::ostringstream out;
    out << "operation,instance,value\n";
    for (const auto& r : rows) out << r[0] << "," << r[1] << "," << r[2] << "\n";
    spit(path, out.str());
}

} // namespace cmg
