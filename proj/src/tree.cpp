#include "treealign/tree.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "treealign/error.hpp"

namespace treealign {

Tree Tree::from_parents(std::vector<NodeId> parent, std::vector<double> edge_length) {
    const std::size_t n = parent.size();
    if (n == 0) throw InputError("tree must have at least one node");
    if (edge_length.size() != n) throw InputError("tree: parent and edge_length sizes differ");
    if (n > static_cast<std::size_t>(std::numeric_limits<NodeId>::max()))
        throw InputError("tree: too many nodes");

    Tree t;
    t.parent_ = std::move(parent);
    t.edge_length_ = std::move(edge_length);

    for (std::size_t v = 0; v < n; ++v) {
        const NodeId p = t.parent_[v];
        if (p == kNoParent) {
            if (t.root_ != kNoParent) throw InputError("tree: more than one root");
            t.root_ = static_cast<NodeId>(v);
            t.edge_length_[v] = 0.0;
            continue;
        }
        if (p < 0 || static_cast<std::size_t>(p) >= n)
            throw InputError("tree: node " + std::to_string(v) + " has invalid parent " + std::to_string(p));
        if (static_cast<std::size_t>(p) == v) throw InputError("tree: node " + std::to_string(v) + " is its own parent");
        const double w = t.edge_length_[v];
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InputError("tree: edge length of node " + std::to_string(v) + " must be finite and >= 0");
    }
    if (t.root_ == kNoParent) throw InputError("tree: no root");

    // CSR children lists, increasing id within each list.
    t.child_offset_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (t.parent_[v] != kNoParent) ++t.child_offset_[t.parent_[v] + 1];
    std::partial_sum(t.child_offset_.begin(), t.child_offset_.end(), t.child_offset_.begin());
    t.children_.resize(n - 1);
    std::vector<std::size_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
    for (std::size_t v = 0; v < n; ++v)
        if (t.parent_[v] != kNoParent) t.children_[fill[t.parent_[v]]++] = static_cast<NodeId>(v);

    // Iterative DFS from the root; anything unreached sits on a cycle.
    t.depth_.assign(n, 0);
    t.root_distance_.assign(n, 0.0);
    t.tin_.assign(n, 0);
    t.tout_.assign(n, 0);
    t.preorder_.reserve(n);
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(t.root_, 0);
    t.depth_[t.root_] = 1;
    t.tin_[t.root_] = 0;
    t.preorder_.push_back(t.root_);
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        const auto kids = t.children(v);
        if (next < kids.size()) {
            const NodeId c = kids[next++];
            t.depth_[c] = t.depth_[v] + 1;
            t.root_distance_[c] = t.root_distance_[v] + t.edge_length_[c];
            t.tin_[c] = t.preorder_.size();
            t.preorder_.push_back(c);
            stack.emplace_back(c, 0);
        } else {
            t.tout_[v] = t.preorder_.size();
            stack.pop_back();
        }
    }
    if (t.preorder_.size() != n) throw InputError("tree: parent links contain a cycle");
    t.max_depth_ = *std::max_element(t.depth_.begin(), t.depth_.end());
    return t;
}

void Tree::check_node(NodeId v) const {
    if (!contains(v)) throw InputError("invalid node id " + std::to_string(v) + " (tree has " + std::to_string(size()) + " nodes)");
}

Tree Tree::rerooted(NodeId new_root) const {
    check_node(new_root);
    std::vector<NodeId> parent(parent_);
    std::vector<double> length(edge_length_);
    // Flip every edge on the path new_root -> old root.
    NodeId prev = kNoParent;
    double prev_len = 0.0;
    NodeId v = new_root;
    while (v != kNoParent) {
        const NodeId up = parent_[v];
        const double up_len = edge_length_[v];
        parent[v] = prev;
        length[v] = prev == kNoParent ? 0.0 : prev_len;
        prev = v;
        prev_len = up_len;
        v = up;
    }
    return from_parents(std::move(parent), std::move(length));
}

double tree_distance(const Tree& tree, NodeId u, NodeId v) {
    tree.check_node(u);
    tree.check_node(v);
    if (u == v) return 0.0;
    const NodeId a = lowest_common_ancestor(tree, u, v);
    return tree.root_distance(u) + tree.root_distance(v) - 2.0 * tree.root_distance(a);
}

NodeId lowest_common_ancestor(const Tree& tree, NodeId u, NodeId v) {
    tree.check_node(u);
    tree.check_node(v);
    if (tree.is_ancestor(u, v)) return u;
    if (tree.is_ancestor(v, u)) return v;
    NodeId a = u;
    while (!tree.is_ancestor(a, v)) a = tree.parent(a);
    return a;
}

std::vector<NodeId> subtree_nodes(const Tree& tree, NodeId x) {
    tree.check_node(x);
    const auto order = tree.preorder();
    return {order.begin() + static_cast<std::ptrdiff_t>(tree.preorder_index(x)),
            order.begin() + static_cast<std::ptrdiff_t>(tree.subtree_end(x))};
}

std::vector<NodeId> root_path(const Tree& tree, NodeId v) {
    tree.check_node(v);
    std::vector<NodeId> path;
    for (NodeId u = v; u != kNoParent; u = tree.parent(u)) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

Measure::Measure(std::vector<NodeId> supports, std::vector<double> weights)
    : supports_(std::move(supports)), weights_(std::move(weights)) {
    if (supports_.empty()) throw InputError("measure must have at least one support");
    if (supports_.size() != weights_.size()) throw InputError("measure: supports and weights sizes differ");
    for (double w : weights_)
        if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("measure: weights must be finite and >= 0");
    double total = 0.0;
    for (double w : weights_) total += w;
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os << std::setprecision(17) << "measure: weights sum to " << total << ", expected 1";
        throw InputError(os.str());
    }
    std::vector<NodeId> sorted(supports_);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("measure: supports must be distinct nodes");
}

Measure Measure::normalized(std::vector<NodeId> supports, std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw InputError("measure: weights must have positive sum");
    for (double& w : weights) w /= total;
    return Measure(std::move(supports), std::move(weights));
}

void Measure::check_on(const Tree& tree) const {
    for (NodeId s : supports_)
        if (!tree.contains(s)) throw InputError("measure support " + std::to_string(s) + " is not a node of the tree");
}

double FlowProfile::total_mass() const {
    double t = 0.0;
    for (double m : masses) t += m;
    return t;
}

bool FlowProfile::is_valid(double tol) const {
    if (lengths.size() != masses.size() || lengths.empty()) return false;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(masses[i] > 0.0)) return false;
        if (i > 0 && lengths[i] < lengths[i - 1]) return false;
    }
    return std::abs(total_mass() - 1.0) <= tol;
}

FlowProfile make_flow_profile(std::span<const double> lengths, std::span<const double> masses) {
    if (lengths.size() != masses.size()) throw InputError("flow profile: lengths and masses sizes differ");
    std::vector<std::size_t> order(lengths.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
    FlowProfile p;
    p.lengths.reserve(order.size());
    p.masses.reserve(order.size());
    p.origin.reserve(order.size());
    for (std::size_t i : order) {
        if (!(masses[i] > 0.0)) continue;
        p.lengths.push_back(lengths[i]);
        p.masses.push_back(masses[i]);
        p.origin.push_back(i);
    }
    return p;
}

FlowProfile flow_profile(const Measure& measure, const Tree& tree) {
    measure.check_on(tree);
    std::vector<double> lengths(measure.size());
    for (std::size_t i = 0; i < measure.size(); ++i) lengths[i] = tree.root_distance(measure.support(i));
    return make_flow_profile(lengths, measure.weights());
}

FlowProfile flow_profile(const Measure& measure, const Tree& tree, NodeId root) {
    measure.check_on(tree);
    tree.check_node(root);
    std::vector<double> lengths(measure.size());
    for (std::size_t i = 0; i < measure.size(); ++i) lengths[i] = tree_distance(tree, root, measure.support(i));
    return make_flow_profile(lengths, measure.weights());
}

Tree read_tree(std::istream& in) {
    std::vector<std::tuple<long long, long long, double, std::size_t>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long id = 0, parent = 0;
        double len = 0.0;
        if (!(ls >> id)) continue;  // blank line
        if (!(ls >> parent >> len))
            throw InputError("tree line " + std::to_string(line_no) + ": expected 'node_id parent_id edge_length'");
        std::string extra;
        if (ls >> extra) throw InputError("tree line " + std::to_string(line_no) + ": trailing token '" + extra + "'");
        rows.emplace_back(id, parent, len, line_no);
    }
    const std::size_t n = rows.size();
    std::vector<NodeId> parent(n, kNoParent);
    std::vector<double> length(n, 0.0);
    std::vector<bool> seen(n, false);
    for (const auto& [id, par, len, ln] : rows) {
        if (id < 0 || static_cast<std::size_t>(id) >= n)
            throw InputError("tree line " + std::to_string(ln) + ": node ids must be contiguous 0.." + std::to_string(n - 1));
        if (seen[id]) throw InputError("tree line " + std::to_string(ln) + ": duplicate node id " + std::to_string(id));
        if (par < -1 || par >= static_cast<long long>(n))
            throw InputError("tree line " + std::to_string(ln) + ": invalid parent id " + std::to_string(par));
        seen[id] = true;
        parent[id] = static_cast<NodeId>(par);
        length[id] = len;
    }
    return Tree::from_parents(std::move(parent), std::move(length));
}

void write_tree(std::ostream& out, const Tree& tree) {
    const auto old = out.precision(17);
    for (std::size_t v = 0; v < tree.size(); ++v)
        out << v << ' ' << tree.parent(static_cast<NodeId>(v)) << ' ' << tree.edge_length(static_cast<NodeId>(v)) << '\n';
    out.precision(old);
}

namespace {

// Next line with content after stripping '#' comments; false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

std::size_t read_header(std::istream& in, const char* keyword, std::size_t& line_no) {
    std::string line;
    if (!next_content_line(in, line, line_no))
        throw InputError(std::string("tree measure: missing '") + keyword + " <count>' header");
    std::istringstream ls(line);
    std::string word;
    long long count = -1;
    std::string extra;
    if (!(ls >> word >> count) || word != keyword || count < 1 || (ls >> extra))
        throw InputError("tree measure line " + std::to_string(line_no) + ": expected '" + keyword + " <count>'");
    return static_cast<std::size_t>(count);
}

}  // namespace

TreeMeasure read_tree_measure(std::istream& in) {
    std::size_t line_no = 0;
    const std::size_t n = read_header(in, "tree", line_no);
    std::ostringstream tree_text;
    std::string line;
    for (std::size_t i = 0; i < n; ++i) {
        if (!next_content_line(in, line, line_no))
            throw InputError("tree measure: expected " + std::to_string(n) + " tree lines");
        tree_text << line << '\n';
    }
    std::istringstream tree_in(tree_text.str());
    Tree tree = read_tree(tree_in);

    const std::size_t k = read_header(in, "measure", line_no);
    std::vector<NodeId> supports;
    std::vector<double> weights;
    for (std::size_t i = 0; i < k; ++i) {
        if (!next_content_line(in, line, line_no))
            throw InputError("tree measure: expected " + std::to_string(k) + " measure lines");
        std::istringstream ls(line);
        long long node = -1;
        double w = 0.0;
        std::string extra;
        if (!(ls >> node >> w) || (ls >> extra))
            throw InputError("tree measure line " + std::to_string(line_no) + ": expected 'node_id weight'");
        if (node < 0 || node >= static_cast<long long>(tree.size()))
            throw InputError("tree measure line " + std::to_string(line_no) + ": node " + std::to_string(node) +
                             " is not in the tree");
        supports.push_back(static_cast<NodeId>(node));
        weights.push_back(w);
    }
    if (next_content_line(in, line, line_no))
        throw InputError("tree measure line " + std::to_string(line_no) + ": unexpected trailing content");
    return {std::move(tree), Measure::normalized(std::move(supports), std::move(weights))};
}

void write_tree_measure(std::ostream& out, const TreeMeasure& tm) {
    out << "tree " << tm.tree.size() << '\n';
    write_tree(out, tm.tree);
    const auto old = out.precision(17);
    out << "measure " << tm.measure.size() << '\n';
    for (std::size_t i = 0; i < tm.measure.size(); ++i) out << tm.measure.support(i) << ' ' << tm.measure.weight(i) << '\n';
    out.precision(old);
}

}  // namespace treealign
