#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "treealign/error.hpp"
#include "treealign/flow_align.hpp"

using namespace treealign;

TEST_CASE("aligned value basics") {
    support::Rng rng(1);
    const Tree t = support::random_tree(rng, 12);
    const Measure mu = support::random_measure(rng, t, 5);
    CHECK(aligned_flow_align(mu, t, mu, t) == 0.0);

    const Tree a = Tree::from_parents({-1, 0}, {0, 2.0});
    const Tree b = Tree::from_parents({-1, 0, 1}, {0, 2.0, 3.0});
    CHECK(aligned_flow_align(Measure::dirac(1), a, Measure::dirac(2), b) == 3.0);
}

TEST_CASE("aligned value matches the atom-expansion oracle") {
    support::Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Tree tx = support::random_tree(rng, 25), tz = support::random_tree(rng, 25);
        // Rational weights on random supports.
        auto rational = [&](const Tree& t, long long den) {
            auto rp = support::random_rational_profile(rng, 20, den);
            std::vector<NodeId> nodes(t.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<NodeId>(i);
            std::shuffle(nodes.begin(), nodes.end(), rng);
            nodes.resize(rp.numerators.size());
            std::vector<double> w;
            for (long long n : rp.numerators) w.push_back(static_cast<double>(n) / static_cast<double>(den));
            const Measure m(nodes, w);
            for (std::size_t i = 0; i < nodes.size(); ++i) rp.lengths[i] = t.root_distance(nodes[i]);
            // Oracle works on the (unsorted) rational atoms directly.
            std::vector<std::size_t> order(rp.lengths.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return rp.lengths[p] < rp.lengths[q]; });
            support::RationalProfile sorted;
            sorted.denominator = den;
            for (std::size_t k : order) {
                sorted.lengths.push_back(rp.lengths[k]);
                sorted.numerators.push_back(rp.numerators[k]);
            }
            return std::make_pair(m, sorted);
        };
        const auto [mu, rmu] = rational(tx, 12);
        const auto [nu, rnu] = rational(tz, 18);
        const double expected = std::sqrt(support::atom_expansion_cost(rmu, rnu, LossKind::Squared));
        CHECK(aligned_flow_align(mu, tx, nu, tz) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("plan rows and columns index the supports") {
    support::Rng rng(3);
    const Tree tx = support::random_tree(rng, 10), tz = support::random_tree(rng, 10);
    const Measure mu = support::random_measure(rng, tx, 4), nu = support::random_measure(rng, tz, 6);
    const OtResult r = aligned_flow_align_plan(mu, tx, nu, tz);
    CHECK(r.plan.rows == 4);
    CHECK(r.plan.cols == 6);
    const auto rows = r.plan.row_sums(), cols = r.plan.col_sums();
    for (std::size_t i = 0; i < 4; ++i) CHECK(rows[i] == doctest::Approx(mu.weight(i)));
    for (std::size_t j = 0; j < 6; ++j) CHECK(cols[j] == doctest::Approx(nu.weight(j)));
    double cost = 0;
    for (const auto& e : r.plan.entries) {
        const double d = tx.root_distance(mu.support(e.i)) - tz.root_distance(nu.support(e.j));
        cost += e.mass * d * d;
    }
    CHECK(cost == doctest::Approx(r.cost));
}

TEST_CASE("re-rooting at a node whose subtree has no supports shifts every length") {
    // z3 carries no mass below it: lengths grow by d(r, z3) in the same order.
    const Tree t = Tree::from_parents({-1, 0, 0, 0, 1, 2, 2, 2, 1, 3}, {0, 1, 2, 1.5, 1, 0.5, 0.7, 2.0, 0.3, 0.8});
    const Measure nu({1, 6, 7, 4, 8}, {0.1, 0.2, 0.3, 0.25, 0.15});
    const std::vector<NodeId> roots{0, 9};
    const auto profiles = rerooted_profiles(nu, t, roots);
    REQUIRE(profiles[0].size() == profiles[1].size());
    for (std::size_t k = 0; k < profiles[0].size(); ++k) {
        CHECK(profiles[1].origin[k] == profiles[0].origin[k]);
        CHECK(profiles[1].lengths[k] == doctest::Approx(profiles[0].lengths[k] + t.root_distance(9)));
    }
}

TEST_CASE("mixed re-rooting cases reproduce a fresh sort exactly") {
    // Supports below the new root z4, on its root path (z1, z2) and hanging
    // off the path (z3 below z1; z8, z9 below z2).
    const Tree t = Tree::from_parents({-1, 0, 1, 1, 2, 0, 5, 4, 2, 8, 7, 4},
                                      {0, 1.0, 0.5, 2.0, 0.7, 1.1, 0.4, 0.9, 1.3, 0.2, 0.6, 1.7});
    const Measure nu = Measure::normalized({1, 2, 3, 7, 8, 9, 10, 11, 6}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const std::vector<NodeId> roots = candidate_roots(t, false);
    const auto profiles = rerooted_profiles(nu, t, roots);
    for (std::size_t r = 0; r < roots.size(); ++r) {
        const FlowProfile fresh = flow_profile(nu, t, roots[r]);
        CHECK(profiles[r].lengths == fresh.lengths);
        CHECK(profiles[r].masses == fresh.masses);
        CHECK(profiles[r].origin == fresh.origin);
    }
}

TEST_CASE("incremental profiles equal fresh sorts on random trees") {
    support::Rng rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + support::uniform_index(rng, 60);
        // Integer lengths provoke many equal-length ties.
        Tree t = support::random_tree(rng, n, 1.0, 3.0);
        if (trial % 2) {
            std::vector<double> len(t.edge_lengths().begin(), t.edge_lengths().end());
            for (double& x : len) x = std::round(x);
            t = Tree::from_parents(std::vector<NodeId>(t.parents().begin(), t.parents().end()), len);
        }
        const Measure mu = support::random_measure(rng, t, 1 + support::uniform_index(rng, 25));
        const auto roots = candidate_roots(t, false);
        const auto profiles = rerooted_profiles(mu, t, roots);
        for (std::size_t r = 0; r < roots.size(); ++r) {
            const FlowProfile fresh = flow_profile(mu, t, roots[r]);
            CHECK(profiles[r].lengths == fresh.lengths);
            CHECK(profiles[r].origin == fresh.origin);
        }
    }
}

TEST_CASE("incremental and brute-force root searches agree exactly") {
    support::Rng rng(5);
    RootSearchOptions brute, incremental, threaded;
    brute.strategy = RootStrategy::BruteForce;
    threaded.threads = 3;
    for (int trial = 0; trial < 30; ++trial) {
        const Tree tx = support::random_tree(rng, 2 + support::uniform_index(rng, 30));
        const Tree tz = support::random_tree(rng, 2 + support::uniform_index(rng, 30));
        const Measure mu = support::random_measure(rng, tx, 1 + support::uniform_index(rng, 20));
        const Measure nu = support::random_measure(rng, tz, 1 + support::uniform_index(rng, 20));
        const auto b = flow_align(mu, tx, nu, tz, brute);
        const auto i = flow_align(mu, tx, nu, tz, incremental);
        const auto p = flow_align(mu, tx, nu, tz, threaded);
        CHECK(b.value == i.value);
        CHECK(p.value == i.value);
        CHECK(p.root_x == i.root_x);
        CHECK(p.root_z == i.root_z);
        CHECK(i.value <= aligned_flow_align(mu, tx, nu, tz));
        CHECK(flow_align(nu, tz, mu, tx).value == i.value);
        CHECK(aligned_flow_align(mu, tx.rerooted(i.root_x), nu, tz.rerooted(i.root_z)) == doctest::Approx(i.value));
        RootSearchOptions internal;
        internal.internal_roots_only = true;
        CHECK(flow_align(mu, tx, nu, tz, internal).value >= i.value);
    }
}

TEST_CASE("root search on identical inputs is zero") {
    support::Rng rng(6);
    const Tree t = support::random_tree(rng, 20);
    const Measure mu = support::random_measure(rng, t, 7);
    const auto r = flow_align(mu, t, mu, t);
    CHECK(r.value == 0.0);
    CHECK(r.root_x == 0);
    CHECK(r.root_z == 0);
}

TEST_CASE("candidate roots") {
    const Tree t = Tree::from_parents({-1, 0, 0, 1}, {0, 1, 1, 1});
    CHECK(candidate_roots(t, false) == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(candidate_roots(t, true) == std::vector<NodeId>{0, 1});
    CHECK(candidate_roots(Tree::from_parents({-1}, {0}), true) == std::vector<NodeId>{0});
}

TEST_CASE("GW objective evaluator") {
    support::Rng rng(7);
    const Tree t = support::random_tree(rng, 10);
    const Measure mu = support::random_measure(rng, t, 5);
    TransportPlan identity{5, 5, {}};
    for (std::size_t i = 0; i < 5; ++i) identity.entries.push_back({i, i, mu.weight(i)});
    CHECK(gw_objective(identity, mu, t, mu, t) == 0.0);

    TransportPlan single{1, 1, {{0, 0, 1.0}}};
    CHECK(gw_objective(single, Measure::dirac(3), t, Measure::dirac(1), t) == 0.0);

    TransportPlan wrong{5, 5, {{0, 0, 1.0}}};
    CHECK_THROWS_AS(gw_objective(wrong, mu, t, mu, t), InputError);

    // Two atoms swapped between two two-point measures on a path.
    const Tree path = Tree::from_parents({-1, 0, 1}, {0, 1.0, 2.0});
    const Measure a({0, 2}, {0.5, 0.5});
    const Measure b({0, 1}, {0.5, 0.5});
    TransportPlan p{2, 2, {{0, 0, 0.5}, {1, 1, 0.5}}};
    // |3 - 1|^2 counted for (0,1) and (1,0), each with weight 1/4.
    CHECK(gw_objective(p, a, path, b, path) == doctest::Approx(2.0));
}
