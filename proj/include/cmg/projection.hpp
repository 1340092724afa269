#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cmg/graph_space.hpp"
#include "cmg/rational.hpp"

namespace cmg {

/// Indexed family of graphs with cross projections pi_Y(X) (nonempty vertex
/// subsets of Y for ordered distinct pairs). The verified axiom constant is
/// stored in xi once verify_projection_axioms has run.
struct ProjectionFamily {
    std::vector<GraphSpace> members;
    std::vector<std::vector<std::vector<int>>> proj; // proj[y][x], x != y
    Rational xi{0};
    bool xi_verified = false;
    Rational expected_xi{0};

    int count() const { return (int)members.size(); }
    Rational set_diameter(int y, const std::vector<int>& vs) const;
    /// dpi(Y;X,Z) = diam of pi_Y(X) union pi_Y(Z) in Y.
    Rational dpi(int y, int x, int z) const;
    /// Point projection: the point itself inside its own member, pi otherwise.
    std::vector<int> point_proj(int y, int x_member, int x_local) const;
    void check_shape() const; // totality and nonemptiness of the projections
};

struct AxiomVerification {
    bool ok = false;
    Rational xi{0};
    std::array<int, 3> witness{-1, -1, -1}; // (X, Y, Z) of a (P1) failure at the cap
    std::string what;
};

/// Minimal xi over the realized distance values satisfying (P0) and (P1);
/// (P2) is vacuous for a finite family. Stores xi into the family on success.
AxiomVerification verify_projection_axioms(ProjectionFamily& fam, const Rational& cap = Rational(100000));

struct PerturbedDistances {
    enum class Scheme { Identity, Floor };
    Scheme scheme = Scheme::Identity;
    Rational delta{0};

    Rational value(const ProjectionFamily& fam, int y, const std::vector<int>& a,
                   const std::vector<int>& b) const;
    Rational member_pair(const ProjectionFamily& fam, int y, int x, int z) const;
};

/// Identity keeps d_flat = d_pi (delta 0); floor subtracts delta and clamps at
/// zero. The two-sided perturbation inequality is asserted entry-wise.
PerturbedDistances perturb_distances(const ProjectionFamily& fam, PerturbedDistances::Scheme scheme,
                                     const Rational& delta = Rational(0));

/// Disjoint union of the members plus length-L attachment edges between pairs
/// whose projections elsewhere all stay below K.
struct QuasiTree {
    GraphSpace g;
    std::vector<int> member_of;
    std::vector<int> local_of;
    std::vector<int> offset;
    Rational K{0}, L{1};
    std::vector<std::vector<int>> pair_edges; // [x][y] attachment edge count
    bool connected = false;

    int vertex(int member, int local) const { return offset[member] + local; }
};

QuasiTree build_qtms(const ProjectionFamily& fam, const PerturbedDistances& pert, const Rational& K,
                     const Rational& L = Rational(1));

struct MemberPoint {
    int member;
    int local;
};

struct DistanceFormulaRow {
    MemberPoint x, y;
    bool reachable = false;
    Rational d{0};
    Rational sum_k{0};
    Rational sum_kprime{0};
    bool upper_ok = false;
    bool lower_ok = false;
    bool implication_ok = false;
    int witness_member = -1; // the Z exhibiting a large projection when d > 6K
};

std::vector<DistanceFormulaRow> distance_formula_check(const QuasiTree& qt,
                                                       const ProjectionFamily& fam,
                                                       const PerturbedDistances& pert,
                                                       const Rational& k_prime,
                                                       const std::vector<std::pair<MemberPoint, MemberPoint>>& pairs);

struct RelevantSetResult {
    std::vector<int> ordered; // member indices, ascending in the order
    bool total = true;
    bool antisymmetric = true;
    bool transitive = true;
    std::vector<std::string> violations;
};

/// Members where the pair projects at distance >= t, ordered by the
/// projection comparison at threshold theta (default max(4, 4 xi)).
RelevantSetResult relevant_set(const ProjectionFamily& fam, MemberPoint x, MemberPoint y,
                               const Rational& t, Rational theta = Rational(0));

// instance generators
ProjectionFamily tripod_lines(int leg_length);
ProjectionFamily grid_lines(int count, int spacing, int seg_len = 0);
ProjectionFamily tree_axes(const GraphSpace& tree, int line_count, std::uint64_t seed);

struct SweepRow {
    Rational K;
    int pair_index;
    DistanceFormulaRow row;
    bool order_total = true;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<Rational> threshold; // least K from which everything passes
};

/// K-grid sweep of the distance-formula clauses and relevant-set order
/// totality; the empirical threshold is the first K that stays green.
SweepResult sweep_distance_formula(const ProjectionFamily& fam, const PerturbedDistances& pert,
                                   const std::vector<Rational>& k_grid, const Rational& L,
                                   const Rational& k_prime_factor,
                                   const std::vector<std::pair<MemberPoint, MemberPoint>>& pairs);

} // namespace cmg
