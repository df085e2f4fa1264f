#include "treealign/sampling.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/simd/kernels.hpp"

namespace treealign {

void SamplerConfig::validate(std::size_t dim) const {
    if (num_clusters < 2) throw InputError("sampler: number of clusters must be >= 2");
    if (max_depth < 2) throw InputError("sampler: max depth must be >= 2");
    if (root_mode == RootMode::FixedPoint && root_point.size() != dim)
        throw InputError("sampler: fixed root has dimension " + std::to_string(root_point.size()) + ", points have " +
                         std::to_string(dim));
}

Measure Embedding::measure(std::span<const double> point_weights) const {
    if (point_weights.size() != node_of_point.size())
        throw InputError("embedding: expected " + std::to_string(node_of_point.size()) + " weights");
    std::map<NodeId, double> merged;
    for (std::size_t i = 0; i < point_weights.size(); ++i) merged[node_of_point[i]] += point_weights[i];
    std::vector<NodeId> supports;
    std::vector<double> weights;
    for (const auto& [node, w] : merged) {
        if (w <= 0.0) continue;
        supports.push_back(node);
        weights.push_back(w);
    }
    return Measure::normalized(std::move(supports), std::move(weights));
}

FarthestPointResult farthest_point_clustering(const PointSet& points, std::size_t k, std::size_t init_index) {
    const std::size_t n = points.size();
    if (n == 0) throw InputError("farthest-point clustering: empty input");
    if (k == 0) throw InputError("farthest-point clustering: k must be positive");
    if (init_index >= n) throw InputError("farthest-point clustering: init index out of range");

    const auto& kernels = simd::active();
    const std::size_t dim = points.dim();
    FarthestPointResult r;
    r.assignment.assign(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());

    r.centers.push_back(init_index);
    kernels.update_nearest(points.data(), n, dim, points.row(init_index).data(), best.data(), r.assignment.data(), 0);
    while (r.centers.size() < k && r.centers.size() < n) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (best[i] > best[far]) far = i;
        if (best[far] == 0.0) break;
        const int id = static_cast<int>(r.centers.size());
        r.centers.push_back(far);
        kernels.update_nearest(points.data(), n, dim, points.row(far).data(), best.data(), r.assignment.data(), id);
    }
    r.radius = *std::max_element(best.begin(), best.end());
    return r;
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const PointSet& points, const SamplerConfig& config)
        : points_(points), config_(config), rng_(config.seed) {
        node_points_ = PointSet(points.dim(), {});
        node_of_point_.assign(points.size(), kNoParent);
    }

    Embedding build() {
        std::vector<std::size_t> all(points_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        const std::vector<double> root_pos =
            config_.root_mode == RootMode::FixedPoint ? config_.root_point : center_of(all);
        const NodeId root = add_node(kNoParent, 0.0, root_pos);
        grow(root, 1, all);
        Embedding e;
        e.tree = Tree::from_parents(std::move(parents_), std::move(lengths_));
        e.node_points = std::move(node_points_);
        e.node_of_point = std::move(node_of_point_);
        return e;
    }

private:
    // Mean of the subset; exactly the shared point when all coincide, so a
    // node over identical points sits on them.
    std::vector<double> center_of(const std::vector<std::size_t>& idx) const {
        const auto first = points_.row(idx.front());
        bool identical = true;
        for (std::size_t i : idx) {
            if (!std::equal(first.begin(), first.end(), points_.row(i).begin())) {
                identical = false;
                break;
            }
        }
        if (identical) return {first.begin(), first.end()};
        return points_.subset(idx).mean();
    }

    NodeId add_node(NodeId parent, double length, std::span<const double> pos) {
        const auto id = static_cast<NodeId>(parents_.size());
        parents_.push_back(parent);
        lengths_.push_back(length);
        node_points_.push_back(pos);
        return id;
    }

    void bind(NodeId node, const std::vector<std::size_t>& idx) {
        for (std::size_t i : idx) node_of_point_[i] = node;
    }

    void grow(NodeId node, int depth, const std::vector<std::size_t>& idx) {
        const std::vector<double> pos(node_points_.row(node).begin(), node_points_.row(node).end());
        const bool single_on_node =
            idx.size() == 1 && std::equal(pos.begin(), pos.end(), points_.row(idx.front()).begin());
        if (depth >= config_.max_depth || single_on_node) {
            bind(node, idx);
            return;
        }
        const PointSet subset = points_.subset(idx);
        const std::size_t init =
            config_.init_rule == InitRule::Random ? static_cast<std::size_t>(rng_() % idx.size()) : 0;
        const FarthestPointResult fpc =
            farthest_point_clustering(subset, static_cast<std::size_t>(config_.num_clusters), init);

        std::vector<std::vector<std::size_t>> clusters(fpc.centers.size());
        for (std::size_t i = 0; i < idx.size(); ++i) clusters[fpc.assignment[i]].push_back(idx[i]);

        if (fpc.radius == 0.0) {
            // All points coincide; they stay here unless the node is off them.
            const auto p = points_.row(idx.front());
            if (std::equal(pos.begin(), pos.end(), p.begin())) {
                bind(node, idx);
                return;
            }
        }
        for (const auto& members : clusters) {
            if (members.empty()) continue;
            const std::vector<double> c = center_of(members);
            const NodeId child = add_node(node, euclidean_distance(pos, c), c);
            grow(child, depth + 1, members);
        }
    }

    const PointSet& points_;
    const SamplerConfig& config_;
    std::mt19937_64 rng_;
    std::vector<NodeId> parents_;
    std::vector<double> lengths_;
    PointSet node_points_;
    std::vector<NodeId> node_of_point_;
};

}  // namespace

Embedding sample_tree_metric(const PointSet& points, const SamplerConfig& config) {
    if (points.empty()) throw InputError("tree sampling: empty point set");
    config.validate(points.dim());
    return TreeBuilder(points, config).build();
}

std::vector<Embedding> sample_aligned_root_trees(std::span<const PointSet> measure_points, const SamplerConfig& config) {
    std::vector<Embedding> out;
    out.reserve(measure_points.size());
    for (std::size_t i = 0; i < measure_points.size(); ++i) {
        if (measure_points[i].empty())
            throw InputError("tree sampling: measure " + std::to_string(i) + " has no points");
        SamplerConfig c = config;
        c.seed = derive_seed(config.seed, streams::kMeasure, i);
        out.push_back(sample_tree_metric(measure_points[i], c));
    }
    return out;
}

}  // namespace treealign
