#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace treealign {

using NodeId = std::int32_t;
inline constexpr NodeId kNoParent = -1;

// Rooted tree with nonnegative edge lengths, stored as flat per-node arrays.
// Node ids are contiguous 0..size()-1. Immutable after construction.
class Tree {
public:
    Tree() = default;

    // Builds from a parent array (exactly one kNoParent entry) and the length
    // of each node's edge to its parent. The root's entry is ignored and
    // stored as 0. Children are kept in increasing id order.
    static Tree from_parents(std::vector<NodeId> parent, std::vector<double> edge_length);

    std::size_t size() const { return parent_.size(); }
    NodeId root() const { return root_; }
    bool contains(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < size(); }
    // Throws InputError for ids outside the tree.
    void check_node(NodeId v) const;

    NodeId parent(NodeId v) const { return parent_[v]; }
    double edge_length(NodeId v) const { return edge_length_[v]; }
    int depth(NodeId v) const { return depth_[v]; }
    int max_depth() const { return max_depth_; }
    std::span<const NodeId> children(NodeId v) const {
        return {children_.data() + child_offset_[v], children_.data() + child_offset_[v + 1]};
    }
    bool is_leaf(NodeId v) const { return child_offset_[v] == child_offset_[v + 1]; }

    // d_T(root, v).
    double root_distance(NodeId v) const { return root_distance_[v]; }
    std::span<const double> root_distances() const { return root_distance_; }

    // Depth-first preorder; subtree of v is preorder()[preorder_index(v), subtree_end(v)).
    std::span<const NodeId> preorder() const { return preorder_; }
    std::size_t preorder_index(NodeId v) const { return tin_[v]; }
    std::size_t subtree_end(NodeId v) const { return tout_[v]; }

    // True when a lies on the root path of v (a == v included).
    bool is_ancestor(NodeId a, NodeId v) const { return tin_[a] <= tin_[v] && tout_[v] <= tout_[a]; }

    std::span<const NodeId> parents() const { return parent_; }
    std::span<const double> edge_lengths() const { return edge_length_; }

    // Same nodes and edges, rooted at new_root. Node ids are preserved.
    Tree rerooted(NodeId new_root) const;

    friend bool operator==(const Tree& a, const Tree& b) {
        return a.parent_ == b.parent_ && a.edge_length_ == b.edge_length_;
    }

private:
    std::vector<NodeId> parent_;
    std::vector<double> edge_length_;
    std::vector<int> depth_;
    std::vector<std::size_t> child_offset_;
    std::vector<NodeId> children_;
    std::vector<double> root_distance_;
    std::vector<NodeId> preorder_;
    std::vector<std::size_t> tin_;
    std::vector<std::size_t> tout_;
    NodeId root_ = kNoParent;
    int max_depth_ = 0;
};

// Length of the unique u-v path.
double tree_distance(const Tree& tree, NodeId u, NodeId v);

// Deepest node on both root paths.
NodeId lowest_common_ancestor(const Tree& tree, NodeId u, NodeId v);

// Gamma(x): every node whose root path contains x, in preorder.
std::vector<NodeId> subtree_nodes(const Tree& tree, NodeId x);

// Nodes of the root-to-v path, root first.
std::vector<NodeId> root_path(const Tree& tree, NodeId v);

// Discrete probability measure on tree nodes.
class Measure {
public:
    Measure() = default;
    // Validates: nonempty, equal lengths, distinct supports, weights >= 0
    // summing to 1 within 1e-12.
    Measure(std::vector<NodeId> supports, std::vector<double> weights);
    // Divides weights by their sum first.
    static Measure normalized(std::vector<NodeId> supports, std::vector<double> weights);
    // Point mass.
    static Measure dirac(NodeId v) { return Measure({v}, {1.0}); }

    std::size_t size() const { return supports_.size(); }
    std::span<const NodeId> supports() const { return supports_; }
    std::span<const double> weights() const { return weights_; }
    NodeId support(std::size_t i) const { return supports_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

    // Throws InputError if a support is not a node of tree.
    void check_on(const Tree& tree) const;

private:
    std::vector<NodeId> supports_;
    std::vector<double> weights_;
};

// The 1-D pushforward of a measure under v -> d_T(root, v). Entries sorted by
// (length, original support index); equal lengths are kept as separate atoms.
struct FlowProfile {
    std::vector<double> lengths;
    std::vector<double> masses;
    // Support index each atom came from; empty for synthetic profiles.
    std::vector<std::size_t> origin;

    std::size_t size() const { return lengths.size(); }
    bool empty() const { return lengths.empty(); }
    double total_mass() const;
    // Lengths non-decreasing, masses positive and summing to 1 within tol.
    bool is_valid(double tol = 1e-12) const;
};

FlowProfile flow_profile(const Measure& measure, const Tree& tree);

// Flow profile as if the tree were rooted at `root`.
FlowProfile flow_profile(const Measure& measure, const Tree& tree, NodeId root);

// Sorts (length, mass) atoms by (length, position) into a profile.
FlowProfile make_flow_profile(std::span<const double> lengths, std::span<const double> masses);

// Line format: "node_id parent_id edge_length", parent_id = -1 for the root.
Tree read_tree(std::istream& in);
void write_tree(std::ostream& out, const Tree& tree);

// A tree together with a measure on its nodes. Text form:
//   tree N
//   <N tree lines>
//   measure K
//   <K lines "node_id weight">
// Weights are normalized on reading.
struct TreeMeasure {
    Tree tree;
    Measure measure;
};
TreeMeasure read_tree_measure(std::istream& in);
void write_tree_measure(std::ostream& out, const TreeMeasure& tm);

}  // namespace treealign
