#pragma once

#include <vector>

#include "treealign/flow_align.hpp"
#include "treealign/tree.hpp"

namespace treealign {

// A measure viewed from node x: one atom at x itself (length 0) and one atom
// per child c of x carrying the mass of c's whole subtree (length w_c), all
// renormalized by the mass of x's subtree.
struct TwoDepthMeasure {
    NodeId center = kNoParent;
    std::vector<NodeId> nodes;     // center first, then children in id order
    std::vector<double> masses;    // renormalized; may contain zeros
    std::vector<double> lengths;   // 0 for the center, edge length for children

    // No child carries mass (below 1e-12 in total).
    bool is_simple() const;
    double child_mass() const;
    // Flow profile over the positive atoms; origin indexes `nodes`.
    FlowProfile profile() const;
};

// Throws DegenerateError when the subtree of x carries no mass.
TwoDepthMeasure two_depth_measure(const Measure& mu, const Tree& tree, NodeId x);

// A matched node pair at some depth level with its share of the plan mass.
struct AlignmentItem {
    NodeId x = kNoParent;
    NodeId z = kNoParent;
    double mass = 0.0;
    int level = 1;
};

// Mass bookkeeping of one depth level of the recursion.
struct DepthLevel {
    int level = 1;
    std::size_t items = 0;
    double live_mass = 0.0;      // total mass of the items processed at this level
    double resolved_mass = 0.0;  // mass settled at earlier levels
};

struct DepthAlignTrace {
    double value = 0.0;
    // One entry per level with items, then a final entry with no items whose
    // resolved_mass is the total settled mass.
    std::vector<DepthLevel> levels;
    std::vector<AlignmentItem> items;  // every processed item, FIFO order
};

// Recursive comparison of the two measures level by level from the given roots.
double aligned_depth_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z);

// Same value plus the per-level mass accounting and processed items.
DepthAlignTrace aligned_depth_align_trace(const Measure& mu, const Tree& tree_x, const Measure& nu,
                                          const Tree& tree_z);

// Minimum of the aligned value over every pair of re-rootings, by exhaustive
// search. Ties go to the lexicographically smallest (root_x, root_z).
RootSearchResult depth_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z,
                             const RootSearchOptions& options = {});

}  // namespace treealign
