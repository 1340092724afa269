#pragma once

#include "cmg/graph_space.hpp"
#include "cmg/metric_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Exact four-point hyperbolicity constant: max over quadruples of
/// (largest pair-sum - second largest pair-sum) / 2.
Rational four_point_delta(const FiniteMetricSpace& m);
Rational four_point_delta(const GraphSpace& g);

} // namespace cmg
