#include <doctest.h>

#include <set>
#include <sstream>

#include "treealign/error.hpp"
#include "treealign/experiment.hpp"

using namespace treealign;

TEST_CASE("nearest-neighbour votes") {
    const std::vector<int> labels{0, 1, 1, 0};
    CHECK(knn_classify(std::vector<double>{0.0, 1.0, 2.0, 3.0}, labels, 1) == 0);
    CHECK(knn_classify(std::vector<double>{0.5, 0.1, 0.2, 3.0}, labels, 3) == 1);
    // Two-two tie goes to the smaller class.
    CHECK(knn_classify(std::vector<double>{0.4, 0.1, 0.2, 0.3}, labels, 4) == 0);
    // Equal distances: the earlier training index is the nearer neighbour.
    CHECK(knn_classify(std::vector<double>{1.0, 1.0, 5.0, 5.0}, labels, 1) == 0);
    CHECK(knn_regress(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{1.0, 3.0, 100.0}, 2) == 2.0);
    CHECK_THROWS_AS(knn_classify(std::vector<double>{0.0}, labels, 1), InputError);
    CHECK_THROWS_AS(knn_classify(std::vector<double>{0.0, 1.0, 2.0, 3.0}, labels, 0), InputError);
}

TEST_CASE("discrepancy names") {
    for (const char* name : {"flowalign", "depthalign", "tsfa", "tsda", "sgw"})
        CHECK(std::string(discrepancy_name(parse_discrepancy(name))) == name);
    CHECK_THROWS_AS(parse_discrepancy("gw"), InputError);
}

TEST_CASE("synthetic dataset") {
    SyntheticConfig sc;
    sc.measures = 10;
    sc.points = 7;
    sc.dim = 3;
    const Dataset a = make_two_family_dataset(sc), b = make_two_family_dataset(sc);
    REQUIRE(a.size() == 10);
    CHECK(a.measures[3].points.dim() == 3);
    CHECK(a.measures[3].size() == 7);
    CHECK(*a.labels == std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
    CHECK((*a.targets)[1] == 4.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.measures[i].points == b.measures[i].points);
}

TEST_CASE("k-NN experiment separates the families deterministically") {
    SyntheticConfig sc;
    sc.measures = 30;
    sc.points = 12;
    sc.seed = 8;
    const Dataset ds = make_two_family_dataset(sc);
    ExperimentConfig cfg;
    cfg.spec.n_slices = 3;
    cfg.k_values = {1, 3};
    cfg.repeats = 4;
    cfg.seed = 2;
    const KnnReport r = knn_experiment(ds, cfg);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.classification);
    for (const KnnRow& row : r.rows) CHECK(row.mean == 1.0);

    cfg.threads = 4;
    std::ostringstream a, b;
    write_knn_report(a, r);
    write_knn_report(b, knn_experiment(ds, cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("k,metric,mean,std\n", 0) == 0);

    cfg.train_fraction = 1.5;
    CHECK_THROWS_AS(knn_experiment(ds, cfg), InputError);
}

TEST_CASE("a duplicated measure is its own nearest neighbour") {
    SyntheticConfig sc;
    sc.measures = 6;
    sc.points = 10;
    Dataset ds = make_two_family_dataset(sc);
    BenchConfig cfg;
    for (Discrepancy d : {Discrepancy::FlowAlign, Discrepancy::DepthAlign, Discrepancy::TreeSlicedFlow,
                          Discrepancy::TreeSlicedDepth, Discrepancy::SlicedGW}) {
        cfg.discrepancy = d;
        const double self = evaluate_discrepancy(ds.measures[0], ds.measures[0], cfg);
        if (d == Discrepancy::SlicedGW)
            CHECK(self <= 1e-9);
        else
            CHECK(self == 0.0);
        CHECK(evaluate_discrepancy(ds.measures[0], ds.measures[1], cfg) > self);
    }
}

TEST_CASE("benchmark rows") {
    SyntheticConfig sc;
    sc.measures = 6;
    sc.points = 8;
    const Dataset ds = make_two_family_dataset(sc);
    BenchConfig cfg;
    cfg.pairs = 5;
    const BenchReport r = bench(ds, cfg);
    REQUIRE(r.rows.size() == 5);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const BenchRow& row : r.rows) {
        CHECK(row.a != row.b);
        CHECK(row.a < ds.size());
        CHECK(row.b < ds.size());
        CHECK(row.value >= 0.0);
        seen.insert({row.a, row.b});
    }
    CHECK(seen.size() == 5);
    std::ostringstream v1, v2;
    write_bench_values(v1, r);
    write_bench_values(v2, bench(ds, cfg));
    CHECK(v1.str() == v2.str());

    cfg.pairs = 0;
    CHECK_THROWS_AS(bench(ds, cfg), InputError);
    cfg.pairs = 1000;
    CHECK_THROWS_AS(bench(ds, cfg), InputError);
}
