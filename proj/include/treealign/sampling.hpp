#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treealign/points.hpp"
#include "treealign/tree.hpp"

namespace treealign {

enum class RootMode {
    MeanOfSupports,  // root at the arithmetic mean of the points
    FixedPoint,      // root at SamplerConfig::root_point
};

enum class InitRule {
    Random,      // first farthest-point center drawn from the seeded generator
    FirstPoint,  // first center is always the first point of the current set
};

struct SamplerConfig {
    int num_clusters = 4;  // kappa, >= 2
    int max_depth = 6;     // H_T, >= 2; root is depth 1
    std::uint64_t seed = 0;
    RootMode root_mode = RootMode::MeanOfSupports;
    std::vector<double> root_point;  // FixedPoint only
    InitRule init_rule = InitRule::Random;

    void validate(std::size_t dim) const;
};

// Sampled tree plus the binding between tree nodes and ambient points.
struct Embedding {
    Tree tree;
    PointSet node_points;               // position of every node
    std::vector<NodeId> node_of_point;  // node each input point ended at

    // Pushes point weights onto their nodes; points sharing a node merge.
    Measure measure(std::span<const double> point_weights) const;
};

struct FarthestPointResult {
    std::vector<std::size_t> centers;  // indices into the input points
    std::vector<int> assignment;       // per point, index into centers
    double radius = 0.0;               // max distance from a point to its center
};

// Greedy k-center: first center points[init_index], then repeatedly the point
// farthest from the chosen centers (lowest index on ties). Points go to the
// nearest center (lowest center index on ties). Stops early once every point
// coincides with a center.
FarthestPointResult farthest_point_clustering(const PointSet& points, std::size_t k, std::size_t init_index);

// Hierarchical farthest-point clustering into a tree metric. Each node sits
// at the mean of its cluster; edges carry the Euclidean parent-child length.
Embedding sample_tree_metric(const PointSet& points, const SamplerConfig& config);

// One embedding per point set, seeds derived from config.seed and the index.
std::vector<Embedding> sample_aligned_root_trees(std::span<const PointSet> measure_points, const SamplerConfig& config);

}  // namespace treealign
