#include "cmg/metric_space.hpp"

#include <algorithm>

#include "cmg/errors.hpp"

namespace cmg {

Rational FiniteMetricSpace::diameter() const {
    Rational m(0);
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j)
            if (d(i, j) > m) m = d(i, j);
    return m;
}

bool FiniteMetricSpace::is_ultrametric() const {
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < n(); ++j)
            for (int k = 0; k < n(); ++k) {
                Rational m = std::max(d(i, k), d(k, j));
                if (d(i, j) > m) return false;
            }
    return true;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> ids, std::vector<Rational> matrix) {
    if (matrix.size() != ids.size() * ids.size())
        throw StructuralError("metric: matrix size does not match point count");
    FiniteMetricSpace m;
    m.points = std::move(ids);
    m.dist = std::move(matrix);
    return m;
}

std::string MetricViolation::describe() const {
    switch (kind) {
        case Dimension: return "matrix dimensions do not match point count";
        case Diagonal: return "nonzero diagonal at (" + std::to_string(i) + ")";
        case Symmetry: return "symmetry violation at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Positivity: return "nonpositive off-diagonal at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        case Triangle:
            return "triangle violation d(" + std::to_string(i) + "," + std::to_string(j) + ") > d(" +
                   std::to_string(i) + "," + std::to_string(k) + ") + d(" + std::to_string(k) + "," +
                   std::to_string(j) + ")";
    }
    return "unknown";
}

MetricCheckReport check_metric(const FiniteMetricSpace& m, size_t max_violations) {
    if (m.dist.size() != m.points.size() * m.points.size())
        throw StructuralError("check_metric: matrix dimensions do not match point count");
    MetricCheckReport rep;
    auto add = [&](MetricViolation v) {
        if (rep.violations.size() < max_violations) rep.violations.push_back(v);
    };
    // exact comparisons for exact data; inexact inputs get the 1e-9 slack
    Rational tol = m.inexact ? Rational(1, 1000000000) : Rational(0);
    int n = m.n();
    for (int i = 0; i < n; ++i) {
        if (m.d(i, i).abs() > tol) add({MetricViolation::Diagonal, i, i, -1});
        for (int j = 0; j < n; ++j) {
            if (i != j && (m.d(i, j) - m.d(j, i)).abs() > tol) {
                if (i < j) add({MetricViolation::Symmetry, i, j, -1});
            }
            if (i != j && !(m.d(i, j) > tol)) add({MetricViolation::Positivity, i, j, -1});
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                if (m.d(i, j) > m.d(i, k) + m.d(k, j) + tol) add({MetricViolation::Triangle, i, j, k});
            }
    return rep;
}

} // namespace cmg
