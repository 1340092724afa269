#include "cmg/graph_space.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>

#include "cmg/errors.hpp"

namespace cmg {

static std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    __int128 l = (__int128)a / std::gcd(a, b) * b;
    return Rational::narrow(l);
}

GraphSpace::GraphSpace(int n, std::vector<GraphEdge> edges, std::vector<std::string> labels,
                       bool defer_metric, bool allow_disconnected)
    : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (n_ <= 0) throw StructuralError("graph: needs at least one vertex");
    if (labels_.empty()) {
        labels_.reserve(n_);
        for (int i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
    }
    if ((int)labels_.size() != n_) throw StructuralError("graph: label count mismatch");

    tick_den_ = 1;
    for (const auto& e : edges_) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_ || e.u == e.v)
            throw StructuralError("graph: bad edge endpoints");
        if (!(e.len > Rational(0))) throw StructuralError("graph: nonpositive edge length");
        tick_den_ = lcm_checked(tick_den_, e.len.den);
    }
    edge_ticks_.reserve(edges_.size());
    for (const auto& e : edges_) {
        __int128 t = (__int128)e.len.num * (tick_den_ / e.len.den);
        edge_ticks_.push_back(Rational::narrow(t));
    }
    unit_ = true;
    for (auto t : edge_ticks_)
        if (t != 1 || tick_den_ != 1) { unit_ = false; break; }

    adj_.assign(n_, {});
    for (int e = 0; e < (int)edges_.size(); ++e) {
        adj_[edges_[e].u].push_back({edges_[e].v, e});
        adj_[edges_[e].v].push_back({edges_[e].u, e});
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());

    // connectivity check is always done, even when the matrix is deferred
    std::vector<char> seen(n_, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (auto [v, e] : adj_[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++cnt;
                q.push_back(v);
            }
    }
    connected_ = cnt == n_;
    if (!connected_ && !allow_disconnected) throw StructuralError("graph: not connected");

    if (!defer_metric) compute_metric();
}

void GraphSpace::ensure_metric() const {
    if (dist_.empty()) compute_metric();
}

std::vector<std::int64_t> GraphSpace::dist_row_from(int src) const {
    std::vector<std::int64_t> d(n_, -1);
    if (unit_) {
        std::deque<int> q{src};
        d[src] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (auto [v, e] : adj_[u])
                if (d[v] < 0) {
                    d[v] = d[u] + 1;
                    q.push_back(v);
                }
        }
    } else {
        using Item = std::pair<std::int64_t, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        d[src] = 0;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du != d[u]) continue;
            for (auto [v, e] : adj_[u]) {
                std::int64_t nd = du + edge_ticks_[e];
                if (d[v] < 0 || nd < d[v]) {
                    d[v] = nd;
                    pq.push({nd, v});
                }
            }
        }
    }
    return d;
}

void GraphSpace::compute_metric() const {
    dist_.assign((size_t)n_ * n_, -1);
    for (int s = 0; s < n_; ++s) {
        auto row = dist_row_from(s);
        std::copy(row.begin(), row.end(), dist_.begin() + (size_t)s * n_);
    }
}

std::int64_t GraphSpace::dist_ticks(int i, int j) const {
    ensure_metric();
    return dist_[(size_t)i * n_ + j];
}

std::int64_t GraphSpace::diameter_ticks() const {
    ensure_metric();
    std::int64_t m = 0;
    for (auto t : dist_) m = std::max(m, t);
    return m;
}

Rational GraphSpace::diameter() const { return Rational(diameter_ticks(), tick_den_); }

std::vector<int> GraphSpace::geodesic(int x, int y) const {
    if (x < 0 || x >= n_ || y < 0 || y >= n_) throw StructuralError("geodesic: vertex out of range");
    ensure_metric();
    std::vector<int> path{y};
    int cur = y;
    while (cur != x) {
        int best = -1;
        for (auto [u, e] : adj_[cur]) {
            if (dist_ticks(x, u) + edge_ticks_[e] == dist_ticks(x, cur)) {
                if (best < 0 || u < best) best = u;
            }
        }
        if (best < 0) throw StructuralError("geodesic: no predecessor (graph metric corrupt)");
        path.push_back(best);
        cur = best;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

GraphSpace GraphSpace::path(int num_vertices) {
    std::vector<GraphEdge> es;
    for (int i = 0; i + 1 < num_vertices; ++i) es.push_back({i, i + 1, Rational(1)});
    return GraphSpace(num_vertices, std::move(es));
}

GraphSpace GraphSpace::cycle(int num_vertices) {
    std::vector<GraphEdge> es;
    for (int i = 0; i < num_vertices; ++i) es.push_back({i, (i + 1) % num_vertices, Rational(1)});
    return GraphSpace(num_vertices, std::move(es));
}

GraphSpace GraphSpace::grid(int rows, int cols) {
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<GraphEdge> es;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) es.push_back({id(r, c), id(r, c + 1), Rational(1)});
            if (r + 1 < rows) es.push_back({id(r, c), id(r + 1, c), Rational(1)});
        }
    return GraphSpace(rows * cols, std::move(es));
}

GraphSpace GraphSpace::random_tree(int num_vertices, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<GraphEdge> es;
    for (int v = 1; v < num_vertices; ++v) {
        int p = (int)rng.below((std::uint64_t)v);
        es.push_back({p, v, Rational(1)});
    }
    return GraphSpace(num_vertices, std::move(es));
}

GraphSpace GraphSpace::complete_from_metric(const FiniteMetricSpace& m) {
    std::vector<GraphEdge> es;
    for (int i = 0; i < m.n(); ++i)
        for (int j = i + 1; j < m.n(); ++j) es.push_back({i, j, m.d(i, j)});
    return GraphSpace(m.n(), std::move(es), m.points);
}

std::int64_t hausdorff_ticks(const GraphSpace& g, const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() || b.empty()) throw StructuralError("hausdorff: empty set");
    std::int64_t h = 0;
    auto one_side = [&](const std::vector<int>& from, const std::vector<int>& to) {
        for (int x : from) {
            std::int64_t best = -1;
            for (int y : to) {
                std::int64_t d = g.dist_ticks(x, y);
                if (best < 0 || d < best) best = d;
            }
            h = std::max(h, best);
        }
    };
    one_side(a, b);
    one_side(b, a);
    return h;
}

Rational hausdorff(const GraphSpace& g, const std::vector<int>& a, const std::vector<int>& b) {
    return Rational(hausdorff_ticks(g, a, b), g.tick_den());
}

GraphSpace visualize(const GraphSpace& g, int ray_length) {
    if (ray_length < 0) throw ParameterError("visualize: negative ray length");
    int n = g.n();
    std::vector<GraphEdge> es = g.edges();
    std::vector<std::string> labels = g.labels();
    int next = n;
    for (int v = 0; v < n; ++v) {
        int prev = v;
        for (int s = 1; s <= ray_length; ++s) {
            labels.push_back(g.label(v) + "+r" + std::to_string(s));
            es.push_back({prev, next, Rational(1)});
            prev = next;
            ++next;
        }
    }
    return GraphSpace(next, std::move(es), std::move(labels));
}

GraphSpace visualize(const FiniteMetricSpace& m, int ray_length) {
    return visualize(GraphSpace::complete_from_metric(m), ray_length);
}

} // namespace cmg
