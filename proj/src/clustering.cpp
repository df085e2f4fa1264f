#include "treealign/clustering.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/parallel.hpp"
#include "treealign/univariate_ot.hpp"

namespace treealign {
namespace {

using Centroid = std::vector<FlowBarycenter>;

// A single measure's own profile is its exact barycenter when it fits in
// the support budget; otherwise fall back to the fixed-mass solver.
FlowBarycenter barycenter_of(std::span<const FlowProfile* const> members, const KMeansOptions& options) {
    if (members.size() == 1 && members.front()->size() <= options.supports)
        return {members.front()->lengths, members.front()->masses};
    std::vector<FlowProfile> profiles;
    profiles.reserve(members.size());
    for (const FlowProfile* m : members) profiles.push_back(*m);
    const std::vector<double> p(members.size(), 1.0 / static_cast<double>(members.size()));
    BarycenterOptions bo;
    bo.k = options.supports;
    bo.max_iter = options.barycenter_iter;
    return flow_barycenter(profiles, p, bo).barycenter;
}

Centroid centroid_of_measure(const std::vector<FlowProfile>& slices, const KMeansOptions& options) {
    Centroid c;
    c.reserve(slices.size());
    for (const FlowProfile& s : slices) {
        const FlowProfile* ptr = &s;
        c.push_back(barycenter_of(std::span<const FlowProfile* const>(&ptr, 1), options));
    }
    return c;
}

struct Assignment {
    std::vector<int> label;
    std::vector<double> distance;
    double inertia = 0.0;
};

Assignment assign(const std::vector<std::vector<FlowProfile>>& profiles, const std::vector<Centroid>& centroids,
                  int threads) {
    Assignment a;
    const std::size_t n = profiles.size();
    a.label.assign(n, 0);
    a.distance.assign(n, 0.0);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centroids.size(); ++c) {
                const double d = centroid_distance(profiles[m], centroids[c]);
                if (d < best) {
                    best = d;
                    a.label[m] = static_cast<int>(c);
                }
            }
            a.distance[m] = best;
        }
    });
    CompensatedSum inertia;
    for (double d : a.distance) inertia.add(d * d);
    a.inertia = inertia.value();
    return a;
}

std::vector<Centroid> kmeanspp(const std::vector<std::vector<FlowProfile>>& profiles, const KMeansOptions& options) {
    const std::size_t n = profiles.size();
    std::mt19937_64 rng(derive_seed(options.seed, streams::kInit));
    std::vector<Centroid> centroids;
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t pick = static_cast<std::size_t>(rng() % n);
    std::vector<std::size_t> chosen;
    while (true) {
        chosen.push_back(pick);
        centroids.push_back(centroid_of_measure(profiles[pick], options));
        if (centroids.size() == options.clusters) break;
        CompensatedSum total;
        for (std::size_t m = 0; m < n; ++m) {
            const double d = centroid_distance(profiles[m], centroids.back());
            d2[m] = std::min(d2[m], d * d);
            total.add(d2[m]);
        }
        if (total.value() > 0.0) {
            // Draw proportionally to squared distance from a uniform in [0, total).
            const double u = std::uniform_real_distribution<double>(0.0, total.value())(rng);
            double acc = 0.0;
            pick = n;
            for (std::size_t m = 0; m < n; ++m) {
                if (d2[m] <= 0.0) continue;
                acc += d2[m];
                pick = m;
                if (u < acc) break;
            }
        } else {
            // Every measure coincides with a centroid: take the lowest index
            // not yet chosen as a seed.
            pick = 0;
            while (std::find(chosen.begin(), chosen.end(), pick) != chosen.end()) ++pick;
        }
    }
    return centroids;
}

}  // namespace

double centroid_distance(std::span<const FlowProfile> measure, std::span<const FlowBarycenter> centroid) {
    if (measure.size() != centroid.size()) throw InputError("centroid distance: slice counts differ");
    CompensatedSum total;
    for (std::size_t s = 0; s < measure.size(); ++s) total.add(wasserstein2(measure[s], centroid[s].profile()));
    return total.value() / static_cast<double>(measure.size());
}

ClusteringResult kmeans_profiles(const std::vector<std::vector<FlowProfile>>& profiles, const KMeansOptions& options) {
    const std::size_t n = profiles.size();
    if (options.clusters < 1) throw InputError("k-means: number of clusters must be >= 1");
    if (n < options.clusters)
        throw InputError("k-means: " + std::to_string(n) + " measures for " + std::to_string(options.clusters) +
                         " clusters");
    if (options.supports < 1) throw InputError("k-means: number of barycenter supports must be >= 1");
    if (options.max_iter < 0) throw InputError("k-means: max_iter must be >= 0");
    const std::size_t slices = profiles.front().size();
    for (const auto& p : profiles)
        if (p.size() != slices || slices == 0) throw InputError("k-means: every measure needs the same nonzero slice count");

    ClusteringResult r;
    std::vector<Centroid> centroids = kmeanspp(profiles, options);
    Assignment current = assign(profiles, centroids, options.threads);
    r.inertia_history.push_back(current.inertia);

    for (int it = 0; it < options.max_iter; ++it) {
        std::vector<std::vector<std::size_t>> members(options.clusters);
        for (std::size_t m = 0; m < n; ++m) members[current.label[m]].push_back(m);

        std::vector<Centroid> next(options.clusters, Centroid(slices));
        std::vector<bool> reseeded(n, false);
        for (std::size_t c = 0; c < options.clusters; ++c) {
            if (!members[c].empty()) continue;
            // Empty cluster: restart it at the measure farthest from its centroid.
            std::size_t far = n;
            for (std::size_t m = 0; m < n; ++m)
                if (!reseeded[m] && (far == n || current.distance[m] > current.distance[far])) far = m;
            reseeded[far] = true;
            next[c] = centroid_of_measure(profiles[far], options);
        }
        parallel_for(options.clusters * slices, options.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t task = begin; task < end; ++task) {
                const std::size_t c = task / slices, s = task % slices;
                if (members[c].empty()) continue;
                std::vector<const FlowProfile*> ptrs;
                ptrs.reserve(members[c].size());
                for (std::size_t m : members[c]) ptrs.push_back(&profiles[m][s]);
                next[c][s] = barycenter_of(ptrs, options);
            }
        });

        Assignment updated = assign(profiles, next, options.threads);
        // The centroid step minimizes squared distances slice by slice, not
        // the squared mean over slices, so it can occasionally overshoot;
        // such an update is rejected and the run stops.
        if (updated.inertia > current.inertia) break;
        const bool unchanged = updated.label == current.label;
        centroids = std::move(next);
        current = std::move(updated);
        r.inertia_history.push_back(current.inertia);
        r.iterations = it + 1;
        if (unchanged) break;
    }
    r.centroids = std::move(centroids);
    r.assignment = current.label;
    r.inertia = current.inertia;
    return r;
}

ClusteringResult kmeans(std::span<const WeightedPoints> measures, const KMeansOptions& options) {
    if (options.spec.base != SliceBase::FlowAligned) throw InputError("k-means: only flow-aligned tree slices are supported");
    options.spec.validate();
    if (measures.size() < options.clusters)
        throw InputError("k-means: " + std::to_string(measures.size()) + " measures for " +
                         std::to_string(options.clusters) + " clusters");
    std::vector<std::vector<FlowProfile>> profiles(measures.size());
    parallel_for(measures.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) profiles[m] = prepare_slices(measures[m], options.spec).profiles;
    });
    return kmeans_profiles(profiles, options);
}

PairCounts pair_counts(std::span<const int> assignment, std::span<const int> labels) {
    if (assignment.size() != labels.size()) throw InputError("pair counts: assignment and labels differ in length");
    PairCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const bool same_cluster = assignment[i] == assignment[j];
            const bool same_label = labels[i] == labels[j];
            if (same_cluster && same_label) ++c.tp;
            else if (same_cluster) ++c.fp;
            else if (same_label) ++c.fn;
            else ++c.tn;
        }
    }
    return c;
}

double f_beta(std::span<const int> assignment, std::span<const int> labels) {
    if (labels.size() < 2) throw InputError("F-beta: need at least two items");
    const PairCounts c = pair_counts(assignment, labels);
    const double same = static_cast<double>(c.tp + c.fn);
    const double different = static_cast<double>(c.fp + c.tn);
    if (same == 0.0) throw DegenerateError("F-beta: no pair shares a label");
    if (different == 0.0) throw DegenerateError("F-beta: every pair shares a label");
    const double beta2 = different / same;
    const double precision = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    const double recall = static_cast<double>(c.tp) / same;
    if (precision == 0.0 && recall == 0.0) return 0.0;
    return (beta2 + 1.0) * precision * recall / (beta2 * precision + recall);
}

}  // namespace treealign
