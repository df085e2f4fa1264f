#pragma once

// Random instance generators and independent reference implementations used
// by the unit tests and the acceptance runner. The references deliberately
// avoid the library's kernels: they work from first principles (explicit
// paths, atom expansion, exhaustive search) so they can act as oracles.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "treealign/points.hpp"
#include "treealign/tree.hpp"
#include "treealign/univariate_ot.hpp"

namespace support {

using treealign::FlowProfile;
using treealign::Measure;
using treealign::NodeId;
using treealign::PointSet;
using treealign::Tree;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t n);

// Random recursive tree: node i > 0 hangs below a uniformly chosen earlier
// node; edge lengths uniform in [lo, hi].
Tree random_tree(Rng& rng, std::size_t n, double lo = 0.1, double hi = 2.0);

// Root plus n-1 leaves.
Tree random_star(Rng& rng, std::size_t n, double lo = 0.1, double hi = 2.0);

// k distinct random nodes with random positive weights.
Measure random_measure(Rng& rng, const Tree& tree, std::size_t k);

// Equal weights on k distinct random nodes drawn from `candidates`.
Measure uniform_measure_on(Rng& rng, std::span<const NodeId> candidates, std::size_t k);

PointSet random_cloud(Rng& rng, std::size_t n, std::size_t dim, double scale = 1.0);

// Random rotation (QR of a Gaussian matrix, det fixed to +1) plus shift.
struct RigidMotion {
    std::size_t dim = 0;
    std::vector<double> q;  // row-major dim x dim
    std::vector<double> shift;
    PointSet apply(const PointSet& p) const;
};
RigidMotion random_motion(Rng& rng, std::size_t dim, double shift_scale = 3.0);

// Profile whose masses are numerators / denominator.
struct RationalProfile {
    std::vector<double> lengths;  // sorted
    std::vector<long long> numerators;
    long long denominator = 1;

    FlowProfile profile() const;
};
RationalProfile random_rational_profile(Rng& rng, std::size_t max_atoms, long long denominator);

// --- oracles ---------------------------------------------------------------

// All-pairs shortest paths on the undirected tree graph.
std::vector<std::vector<double>> floyd_warshall(const Tree& tree);

// Deepest common node of the two root paths, by explicit path intersection.
NodeId lca_by_paths(const Tree& tree, NodeId u, NodeId v);

// Expands both profiles into 1/L atoms (L = lcm of denominators), sorts and
// matches index-wise.
double atom_expansion_cost(const RationalProfile& a, const RationalProfile& b, treealign::LossKind loss);

// Profiles with masses in multiples of 1/units: minimum over every
// permutation matching of the unit atoms (the vertices of the expanded
// assignment polytope), i.e. the exact LP optimum.
double permutation_lp_cost(const RationalProfile& a, const RationalProfile& b, treealign::LossKind loss);

// Optimal k-center radius by exhaustive search over center subsets.
double brute_force_k_center(const PointSet& points, std::size_t k);

// sum_{i,j} ((x_i - x_j)^2 - (y_i - y_j)^2)^2 by the direct double loop.
double gw1d_direct(std::span<const double> x, std::span<const double> y);

// Squared W2 between profiles from the merged quantile functions, plus
// the induced coupling (i, j, mass).
struct QuantileCoupling {
    double cost = 0.0;
    std::vector<treealign::PlanEntry> plan;
};
QuantileCoupling quantile_coupling(const FlowProfile& a, const FlowProfile& b);

// Level-by-level comparison written as plain recursion over explicit subtree
// sums; no queue, no cached statistics.
double recursive_depth_align(const Measure& mu, const Tree& tx, const Measure& nu, const Tree& tz);

// Same-cluster/same-label pair counts from the contingency table.
struct PairTable {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};
PairTable contingency_pairs(std::span<const int> assignment, std::span<const int> labels);

}  // namespace support
