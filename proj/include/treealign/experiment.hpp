#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "treealign/dataset.hpp"
#include "treealign/flow_align.hpp"
#include "treealign/sliced.hpp"

namespace treealign {

struct ExperimentConfig {
    SliceSpec spec;
    std::vector<int> k_values{1};
    double train_fraction = 0.8;
    int repeats = 20;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

struct KnnRow {
    int k = 1;
    double mean = 0.0;  // accuracy (classification) or MAE (regression)
    double std = 0.0;   // population standard deviation across repeats
};

struct KnnReport {
    bool classification = true;
    std::vector<KnnRow> rows;
    double seconds = 0.0;  // wall time including tree sampling; not written by write_knn_report
};

// Rows of a test x train distance matrix -> predictions for one k.
// Classification: majority vote, ties to the smallest class id.
// Neighbors are ordered by (distance, train index).
int knn_classify(std::span<const double> distances, std::span<const int> train_labels, int k);
double knn_regress(std::span<const double> distances, std::span<const double> train_targets, int k);

// Repeated random train/test splits; labels take precedence over targets.
KnnReport knn_experiment(const Dataset& ds, const ExperimentConfig& cfg);

// Deterministic CSV: k,metric,mean,std.
void write_knn_report(std::ostream& out, const KnnReport& report);

// Discrepancies that the benchmark and the CLI know by name.
enum class Discrepancy { FlowAlign, DepthAlign, TreeSlicedFlow, TreeSlicedDepth, SlicedGW };
Discrepancy parse_discrepancy(const std::string& name);
const char* discrepancy_name(Discrepancy d);

struct BenchConfig {
    Discrepancy discrepancy = Discrepancy::FlowAlign;
    bool aligned_root = false;  // FlowAlign/DepthAlign: skip the root search
    RootSearchOptions search;   // root search strategy and threads
    SliceSpec spec;             // slices for the sliced discrepancies; sampler for the others
    std::size_t pairs = 10;
    std::uint64_t seed = 0;
};

struct BenchRow {
    std::size_t a = 0, b = 0;
    double value = 0.0;
    double seconds = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double median_seconds = 0.0;
    double mean_seconds = 0.0;
};

// Times one discrepancy evaluation (including tree sampling) per sampled
// pair of distinct measures, after one untimed warm-up evaluation.
BenchReport bench(const Dataset& ds, const BenchConfig& cfg);

// One discrepancy evaluation between two weighted point sets.
double evaluate_discrepancy(const WeightedPoints& a, const WeightedPoints& b, const BenchConfig& cfg);

// pair,a,b,value (deterministic part of the report).
void write_bench_values(std::ostream& out, const BenchReport& report);
// pair,a,b,seconds plus summary rows.
void write_bench_timings(std::ostream& out, const BenchReport& report);

// Synthetic labelled dataset of two shape families. Family f has a template
// of `points` standard-normal points scaled by scales[f]; every measure is
// its family template plus isotropic noise of standard deviation `spread`,
// moved by a random translation. Labels are the family ids and targets the
// family scales; measures alternate between the families.
struct SyntheticConfig {
    std::size_t measures = 200;
    std::size_t points = 30;
    std::size_t dim = 2;
    double scales[2] = {1.0, 4.0};
    double spread = 0.1;
    double shift = 5.0;  // translations are uniform in [-shift, shift]^dim
    std::uint64_t seed = 0;
};

Dataset make_two_family_dataset(const SyntheticConfig& cfg);

}  // namespace treealign
