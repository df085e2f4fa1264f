#include "treealign/depth_align.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "treealign/detail/best_pair.hpp"
#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/parallel.hpp"

namespace treealign {
namespace {

constexpr double kSimpleThreshold = 1e-12;
constexpr double kPlanDust = 1e-15;

// Per-node masses of a measure on a fixed rooting of a tree.
class SubtreeStats {
public:
    SubtreeStats(const Measure& mu, const Tree& tree) : tree_(tree) {
        mu.check_on(tree);
        const std::size_t n = tree.size();
        node_mass_.assign(n, 0.0);
        for (std::size_t i = 0; i < mu.size(); ++i) node_mass_[mu.support(i)] += mu.weight(i);
        subtree_mass_ = node_mass_;
        weighted_.assign(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) weighted_[v] = node_mass_[v] * tree.root_distance(static_cast<NodeId>(v));
        const auto order = tree.preorder();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId p = tree.parent(*it);
            if (p == kNoParent) continue;
            subtree_mass_[p] += subtree_mass_[*it];
            weighted_[p] += weighted_[*it];
        }
    }

    const Tree& tree() const { return tree_; }

    TwoDepthMeasure two_depth(NodeId x) const {
        const double total = subtree_mass_[x];
        if (!(total > 0.0))
            throw DegenerateError("two-depth measure: subtree of node " + std::to_string(x) + " carries no mass");
        TwoDepthMeasure t;
        t.center = x;
        const auto kids = tree_.children(x);
        t.nodes.reserve(kids.size() + 1);
        t.masses.reserve(kids.size() + 1);
        t.lengths.reserve(kids.size() + 1);
        t.nodes.push_back(x);
        t.masses.push_back(node_mass_[x] / total);
        t.lengths.push_back(0.0);
        for (NodeId c : kids) {
            t.nodes.push_back(c);
            t.masses.push_back(subtree_mass_[c] / total);
            t.lengths.push_back(tree_.edge_length(c));
        }
        return t;
    }

    // Mass-weighted mean path length from x to the measure inside its subtree.
    double mean_depth_below(NodeId x) const {
        const double m = subtree_mass_[x];
        const double v = (weighted_[x] - m * tree_.root_distance(x)) / m;
        return std::max(0.0, v);
    }

private:
    const Tree& tree_;
    std::vector<double> node_mass_;
    std::vector<double> subtree_mass_;
    std::vector<double> weighted_;  // sum over the subtree of mass * root distance
};

double run(const SubtreeStats& sx, const SubtreeStats& sz, DepthAlignTrace* trace) {
    std::deque<AlignmentItem> queue;
    queue.push_back({sx.tree().root(), sz.tree().root(), 1.0, 1});
    CompensatedSum value;
    CompensatedSum resolved;
    CompensatedSum live;
    int level = 1;
    std::size_t level_items = 0;
    double resolved_before = 0.0;

    auto close_level = [&] {
        if (trace && level_items > 0) trace->levels.push_back({level, level_items, live.value(), resolved_before});
        live = CompensatedSum{};
        level_items = 0;
        resolved_before = resolved.value();
    };

    while (!queue.empty()) {
        const AlignmentItem item = queue.front();
        queue.pop_front();
        if (item.level != level) {
            close_level();
            level = item.level;
        }
        ++level_items;
        live.add(item.mass);
        if (trace) trace->items.push_back(item);

        const TwoDepthMeasure tx = sx.two_depth(item.x);
        const TwoDepthMeasure tz = sz.two_depth(item.z);
        const bool simple_x = tx.is_simple();
        const bool simple_z = tz.is_simple();
        if (simple_x && simple_z) {
            resolved.add(item.mass);
            continue;
        }
        if (simple_x || simple_z) {
            // One side has nothing left to align: it pays the remaining mean
            // path length of the other side and the branch stops.
            const double tail = simple_x ? sz.mean_depth_below(item.z) : sx.mean_depth_below(item.x);
            value.add(item.mass * tail);
            resolved.add(item.mass);
            continue;
        }

        const FlowProfile px = tx.profile();
        const FlowProfile pz = tz.profile();
        const OtResult ot = univariate_ot(px, pz, LossKind::Squared);
        value.add(item.mass * std::sqrt(ot.cost));
        for (const PlanEntry& e : ot.plan.entries) {
            const std::size_t ax = px.origin[e.i];
            const std::size_t az = pz.origin[e.j];
            const double child_mass = item.mass * e.mass;
            if (ax == 0 || az == 0 || child_mass <= kPlanDust) {
                resolved.add(child_mass);
                continue;
            }
            queue.push_back({tx.nodes[ax], tz.nodes[az], child_mass, item.level + 1});
        }
    }
    close_level();
    if (trace) trace->levels.push_back({level + 1, 0, 0.0, resolved_before});
    const double v = value.value();
    if (trace) trace->value = v;
    return v;
}

}  // namespace

bool TwoDepthMeasure::is_simple() const { return child_mass() < kSimpleThreshold; }

double TwoDepthMeasure::child_mass() const {
    CompensatedSum s;
    for (std::size_t i = 1; i < masses.size(); ++i) s.add(masses[i]);
    return s.value();
}

FlowProfile TwoDepthMeasure::profile() const { return make_flow_profile(lengths, masses); }

TwoDepthMeasure two_depth_measure(const Measure& mu, const Tree& tree, NodeId x) {
    tree.check_node(x);
    return SubtreeStats(mu, tree).two_depth(x);
}

double aligned_depth_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z) {
    return run(SubtreeStats(mu, tree_x), SubtreeStats(nu, tree_z), nullptr);
}

DepthAlignTrace aligned_depth_align_trace(const Measure& mu, const Tree& tree_x, const Measure& nu,
                                          const Tree& tree_z) {
    DepthAlignTrace trace;
    run(SubtreeStats(mu, tree_x), SubtreeStats(nu, tree_z), &trace);
    return trace;
}

RootSearchResult depth_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z,
                             const RootSearchOptions& options) {
    mu.check_on(tree_x);
    nu.check_on(tree_z);
    const std::vector<NodeId> roots_x = candidate_roots(tree_x, options.internal_roots_only);
    const std::vector<NodeId> roots_z = candidate_roots(tree_z, options.internal_roots_only);

    std::vector<Tree> rx_trees, rz_trees;
    rx_trees.reserve(roots_x.size());
    rz_trees.reserve(roots_z.size());
    for (NodeId r : roots_x) rx_trees.push_back(tree_x.rerooted(r));
    for (NodeId r : roots_z) rz_trees.push_back(tree_z.rerooted(r));
    std::vector<SubtreeStats> sx, sz;
    sx.reserve(roots_x.size());
    sz.reserve(roots_z.size());
    for (const Tree& t : rx_trees) sx.emplace_back(mu, t);
    for (const Tree& t : rz_trees) sz.emplace_back(nu, t);

    const int workers = std::max(1, options.threads);
    std::vector<detail::BestPair> partial(static_cast<std::size_t>(workers));
    const std::size_t chunk = (roots_x.size() + workers - 1) / workers;
    parallel_for(roots_x.size(), workers, [&](std::size_t begin, std::size_t end) {
        detail::BestPair& best = partial[chunk == 0 ? 0 : begin / chunk];
        for (std::size_t a = begin; a < end; ++a)
            for (std::size_t b = 0; b < roots_z.size(); ++b) best.offer(run(sx[a], sz[b], nullptr), roots_x[a], roots_z[b]);
    });
    const detail::BestPair best = detail::BestPair::reduce(partial);
    return {best.value, best.rx, best.rz};
}

}  // namespace treealign
