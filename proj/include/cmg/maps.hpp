#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cmg/rational.hpp"

namespace cmg {

/// Evaluated map between two spaces, by vertex index. assignment[v] < 0
/// means v is outside the declared source subset.
struct PointMap {
    int source_size = 0;
    int target_size = 0;
    std::vector<int> assignment;

    int operator()(int v) const { return assignment[v]; }
    bool total() const {
        for (int a : assignment)
            if (a < 0) return false;
        return !assignment.empty();
    }
    std::vector<int> domain() const {
        std::vector<int> d;
        for (int v = 0; v < (int)assignment.size(); ++v)
            if (assignment[v] >= 0) d.push_back(v);
        return d;
    }
};

struct QIReport {
    Rational lambda{1};
    Rational eps{0};
    std::optional<Rational> coarse_onto_radius;
    size_t sample_size = 0;
    bool feasible = true; // false when the search grid was exhausted
};

using DistFn = std::function<Rational(int, int)>;
using MedianFn = std::function<int(int, int, int)>;

struct DistortionGrid {
    Rational lambda_step{1, 4};
    Rational lambda_cap{16};
    Rational eps_step{1, 2};
    Rational eps_cap{256};
    bool eps_first = true; // search order: minimize eps, then lambda
};

/// Minimal feasible (lambda, eps) on the grid such that every sampled pair
/// satisfies (1/lambda) d - eps <= d' <= lambda d + eps. The fixed search
/// order minimizes eps first so exact scalings report their true factor;
/// lambda-first search is available through the grid config.
QIReport distortion(const PointMap& f, const std::vector<std::pair<int, int>>& pairs,
                    const DistFn& src_dist, const DistFn& dst_dist,
                    const DistortionGrid& grid = {});

/// Max over sampled triples of d'(f mu(x1,x2,x3), mu'(f x1, f x2, f x3)).
Rational quasimedian_defect(const PointMap& f, const std::vector<std::array<int, 3>>& triples,
                            const MedianFn& src_median, const MedianFn& dst_median,
                            const DistFn& dst_dist);

/// Same with the third argument pinned to a basepoint.
Rational pinned_quasimedian_defect(const PointMap& f, int basepoint,
                                   const std::vector<std::pair<int, int>>& pairs,
                                   const MedianFn& src_median, const MedianFn& dst_median,
                                   const DistFn& dst_dist);

/// All unordered pairs / triples over n vertices if within cap, otherwise a
/// seeded sample of the requested size.
std::vector<std::pair<int, int>> pair_sample(int n, size_t cap, std::uint64_t seed, size_t sample_size);
std::vector<std::array<int, 3>> triple_sample(int n, size_t cap, std::uint64_t seed, size_t sample_size);

} // namespace cmg
