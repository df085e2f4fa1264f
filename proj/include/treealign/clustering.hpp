#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treealign/barycenter.hpp"
#include "treealign/points.hpp"
#include "treealign/sliced.hpp"

namespace treealign {

struct KMeansOptions {
    std::size_t clusters = 2;
    SliceSpec spec;              // tree slices; only FlowAligned is supported
    std::size_t supports = 100;  // barycenter supports per centroid slice
    int max_iter = 50;
    int barycenter_iter = 50;
    std::uint64_t seed = 0;      // seeds k-means++ (init stream)
    int threads = 1;
};

struct ClusteringResult {
    std::vector<int> assignment;
    std::vector<std::vector<FlowBarycenter>> centroids;  // [cluster][slice]
    double inertia = 0.0;
    int iterations = 0;                  // accepted Lloyd updates
    std::vector<double> inertia_history;  // after seeding, then per accepted update
};

// Distance between a measure and a centroid: the mean over slices of the
// 2-Wasserstein distance between their flow profiles.
double centroid_distance(std::span<const FlowProfile> measure, std::span<const FlowBarycenter> centroid);

// k-means over per-slice flow profiles, profiles[measure][slice].
ClusteringResult kmeans_profiles(const std::vector<std::vector<FlowProfile>>& profiles, const KMeansOptions& options);

// Samples the slice trees of every measure, then runs kmeans_profiles.
ClusteringResult kmeans(std::span<const WeightedPoints> measures, const KMeansOptions& options);

struct PairCounts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Pairwise decisions over all i < j: same cluster vs same label.
PairCounts pair_counts(std::span<const int> assignment, std::span<const int> labels);

// F-measure over pairwise decisions with beta^2 = |different-label pairs| /
// |same-label pairs|. Throws DegenerateError when either count is zero.
double f_beta(std::span<const int> assignment, std::span<const int> labels);

}  // namespace treealign
