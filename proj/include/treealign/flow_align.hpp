#pragma once

#include <span>
#include <vector>

#include "treealign/tree.hpp"
#include "treealign/univariate_ot.hpp"

namespace treealign {

enum class RootStrategy {
    BruteForce,   // rebuild and re-sort both profiles for every root pair
    Incremental,  // per-tree profiles from one base sort plus run merges
};

struct RootSearchOptions {
    RootStrategy strategy = RootStrategy::Incremental;
    bool internal_roots_only = false;  // skip leaves as candidate roots
    int threads = 1;
};

struct RootSearchResult {
    double value = 0.0;
    NodeId root_x = kNoParent;
    NodeId root_z = kNoParent;
};

// sqrt of the squared-loss 1-D OT between the flow profiles at the given roots.
double aligned_flow_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z);

// The optimal monotone plan at the trees' roots, rows/cols indexing the
// supports of mu/nu. cost is the squared discrepancy.
OtResult aligned_flow_align_plan(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z);

// Minimum of the aligned value over candidate root pairs. Ties go to the
// lexicographically smallest (root_x, root_z).
RootSearchResult flow_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z,
                            const RootSearchOptions& options = {});

// Candidate roots in increasing id order.
std::vector<NodeId> candidate_roots(const Tree& tree, bool internal_only);

// Flow profile of `measure` re-rooted at every node of `roots`, computed
// from the base-root order by shifting, reversing and merging runs.
std::vector<FlowProfile> rerooted_profiles(const Measure& measure, const Tree& tree, std::span<const NodeId> roots);

// Quartic GW objective of a plan between supports of mu and nu, summed
// directly over plan entry pairs. Throws InputError on marginal mismatch.
double gw_objective(const TransportPlan& plan, const Measure& mu, const Tree& tree_x, const Measure& nu,
                    const Tree& tree_z);

}  // namespace treealign
