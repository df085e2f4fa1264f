#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "treealign/clustering.hpp"
#include "treealign/error.hpp"
#include "treealign/experiment.hpp"

using namespace treealign;

TEST_CASE("F-beta on hand-made labelings") {
    const std::vector<int> labels{0, 0, 1, 1};
    CHECK(f_beta(labels, labels) == 1.0);
    CHECK(f_beta(std::vector<int>{5, 5, 2, 2}, labels) == 1.0);
    CHECK(f_beta(std::vector<int>{0, 1, 0, 1}, labels) == 0.0);
    CHECK_THROWS_AS(f_beta(std::vector<int>{0, 1}, std::vector<int>{0, 1}), DegenerateError);
    CHECK_THROWS_AS(f_beta(std::vector<int>{0, 1}, std::vector<int>{3, 3}), DegenerateError);
    CHECK_THROWS_AS(f_beta(std::vector<int>{0}, std::vector<int>{0}), InputError);
    CHECK_THROWS_AS(f_beta(std::vector<int>{0, 1}, std::vector<int>{0, 1, 1}), InputError);
}

TEST_CASE("pair counts match the contingency table") {
    support::Rng rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + support::uniform_index(rng, 40);
        std::vector<int> a(n), l(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(support::uniform_index(rng, 4));
            l[i] = static_cast<int>(support::uniform_index(rng, 3));
        }
        const PairCounts c = pair_counts(a, l);
        const support::PairTable t = support::contingency_pairs(a, l);
        CHECK(c.tp == t.tp);
        CHECK(c.fp == t.fp);
        CHECK(c.fn == t.fn);
        CHECK(c.tn == t.tn);

        // Renaming clusters or labels changes nothing.
        std::vector<int> renamed = a;
        for (int& v : renamed) v = 7 - 2 * v;
        const bool same = c.tp + c.fn > 0 && c.fp + c.tn > 0;
        if (same) {
            CHECK(f_beta(renamed, l) == f_beta(a, l));
            const double f = f_beta(a, l);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }
    }
}

TEST_CASE("k-means with one cluster per measure has zero inertia") {
    support::Rng rng(52);
    std::vector<std::vector<FlowProfile>> profiles;
    for (int m = 0; m < 5; ++m) {
        std::vector<FlowProfile> slices;
        for (int s = 0; s < 3; ++s) {
            const double shift = support::uniform(rng, 0, 5);
            slices.push_back(make_flow_profile(std::vector<double>{shift, shift + 1, shift + 2}, std::vector<double>{0.2, 0.3, 0.5}));
        }
        profiles.push_back(slices);
    }
    KMeansOptions opt;
    opt.clusters = 5;
    const ClusteringResult r = kmeans_profiles(profiles, opt);
    CHECK(r.inertia == 0.0);
    std::vector<int> sorted = r.assignment;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(r.centroids.size() == 5);
    CHECK(r.centroids[0].size() == 3);
}

TEST_CASE("k-means validation") {
    std::vector<std::vector<FlowProfile>> profiles(2, std::vector<FlowProfile>{make_flow_profile(std::vector<double>{1.0}, std::vector<double>{1.0})});
    KMeansOptions opt;
    opt.clusters = 3;
    CHECK_THROWS_AS(kmeans_profiles(profiles, opt), InputError);
    opt.clusters = 0;
    CHECK_THROWS_AS(kmeans_profiles(profiles, opt), InputError);
    opt.clusters = 1;
    opt.supports = 0;
    CHECK_THROWS_AS(kmeans_profiles(profiles, opt), InputError);
    opt.supports = 10;
    opt.spec.base = SliceBase::DepthAligned;
    std::vector<WeightedPoints> pts(2, WeightedPoints::uniform(PointSet::from_rows({{0.0}})));
    CHECK_THROWS_AS(kmeans(pts, opt), InputError);
}

TEST_CASE("k-means separates two shape families and is deterministic") {
    SyntheticConfig sc;
    sc.measures = 40;
    sc.points = 20;
    sc.seed = 3;
    const Dataset ds = make_two_family_dataset(sc);
    KMeansOptions opt;
    opt.spec.n_slices = 4;
    opt.spec.seed = 11;
    opt.seed = 5;
    const ClusteringResult r = kmeans(ds.measures, opt);
    CHECK(f_beta(r.assignment, *ds.labels) == doctest::Approx(1.0));
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) CHECK(r.inertia_history[i] <= r.inertia_history[i - 1]);
    CHECK(r.inertia == r.inertia_history.back());

    opt.threads = 3;
    const ClusteringResult again = kmeans(ds.measures, opt);
    CHECK(again.assignment == r.assignment);
    CHECK(again.inertia == r.inertia);
    CHECK(again.iterations == r.iterations);
}
