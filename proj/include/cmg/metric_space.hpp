#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmg/rational.hpp"

namespace cmg {

/// Finite metric space with an exact symmetric distance matrix.
/// `scale` records the cumulative rescale factor applied to the original
/// distances; `inexact` flags data that entered as floating point.
struct FiniteMetricSpace {
    std::vector<std::string> points;
    std::vector<Rational> dist; // row-major n*n
    Rational scale{1};
    bool inexact = false;
    std::vector<std::vector<Rational>> coords; // optional, per point

    int n() const { return static_cast<int>(points.size()); }

    const Rational& d(int i, int j) const { return dist[static_cast<size_t>(i) * points.size() + j]; }
    Rational& d(int i, int j) { return dist[static_cast<size_t>(i) * points.size() + j]; }

    Rational diameter() const;
    bool is_ultrametric() const;

    static FiniteMetricSpace from_matrix(std::vector<std::string> ids, std::vector<Rational> matrix);
};

struct MetricViolation {
    enum Kind { Dimension, Diagonal, Symmetry, Positivity, Triangle } kind;
    int i = -1, j = -1, k = -1;
    std::string describe() const;
};

struct MetricCheckReport {
    std::vector<MetricViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Lists every violated symmetry/diagonal/positivity/triangle constraint.
/// Matrix and point-count dimensions must already agree.
MetricCheckReport check_metric(const FiniteMetricSpace& m, size_t max_violations = 1000);

} // namespace cmg
