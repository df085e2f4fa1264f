#include "treealign/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <string>

#include "treealign/depth_align.hpp"
#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/parallel.hpp"

namespace treealign {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> neighbors(std::span<const double> distances, int k) {
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 1)), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
                      });
    order.resize(kk);
    return order;
}

// Fisher-Yates driven by raw generator output so the permutation is the
// same with every standard library.
void shuffle(std::vector<std::size_t>& v, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

double mean_of(const std::vector<double>& xs) { return compensated_sum(xs) / static_cast<double>(xs.size()); }

double std_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return std::sqrt(s.value() / static_cast<double>(xs.size()));
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

void ExperimentConfig::validate() const {
    spec.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InputError("train fraction must lie in (0, 1)");
    if (repeats < 1) throw InputError("repeats must be >= 1");
    if (k_values.empty()) throw InputError("at least one k is required");
    for (int k : k_values)
        if (k < 1) throw InputError("k must be >= 1");
}

int knn_classify(std::span<const double> distances, std::span<const int> train_labels, int k) {
    if (distances.size() != train_labels.size() || distances.empty())
        throw InputError("knn: distances and labels must be nonempty and of equal length");
    if (k < 1) throw InputError("knn: k must be >= 1");
    std::map<int, int> votes;
    for (std::size_t i : neighbors(distances, k)) ++votes[train_labels[i]];
    int best = votes.begin()->first, count = 0;
    for (const auto& [label, c] : votes)
        if (c > count) best = label, count = c;
    return best;
}

double knn_regress(std::span<const double> distances, std::span<const double> train_targets, int k) {
    if (distances.size() != train_targets.size() || distances.empty())
        throw InputError("knn: distances and targets must be nonempty and of equal length");
    if (k < 1) throw InputError("knn: k must be >= 1");
    CompensatedSum s;
    const auto nb = neighbors(distances, k);
    for (std::size_t i : nb) s.add(train_targets[i]);
    return s.value() / static_cast<double>(nb.size());
}

KnnReport knn_experiment(const Dataset& ds, const ExperimentConfig& cfg) {
    cfg.validate();
    if (!ds.labels && !ds.targets) throw InputError("knn: dataset has neither labels nor targets");
    if (ds.size() < 2) throw InputError("knn: need at least two measures");
    const auto start = Clock::now();
    KnnReport report;
    report.classification = ds.labels.has_value();
    const std::size_t n = ds.size();

    std::vector<SlicedMeasure> prepared(n);
    parallel_for(n, cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) prepared[i] = prepare_slices(ds.measures[i], cfg.spec);
    });

    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n))), 1, n - 1);
    std::vector<std::vector<double>> scores(cfg.k_values.size());
    for (int r = 0; r < cfg.repeats; ++r) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order, derive_seed(cfg.seed, streams::kSplit, static_cast<std::uint64_t>(r)));
        const std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
        const std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

        std::vector<std::vector<double>> dist(test.size(), std::vector<double>(train.size()));
        parallel_for(test.size() * train.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t) {
                const std::size_t i = t / train.size(), j = t % train.size();
                dist[i][j] = sliced_discrepancy(prepared[test[i]], prepared[train[j]], cfg.spec);
            }
        });

        std::vector<int> train_labels;
        std::vector<double> train_targets;
        for (std::size_t j : train) {
            if (report.classification) train_labels.push_back((*ds.labels)[j]);
            else train_targets.push_back((*ds.targets)[j]);
        }
        for (std::size_t q = 0; q < cfg.k_values.size(); ++q) {
            CompensatedSum score;
            for (std::size_t i = 0; i < test.size(); ++i) {
                if (report.classification) {
                    const int predicted = knn_classify(dist[i], train_labels, cfg.k_values[q]);
                    score.add(predicted == (*ds.labels)[test[i]] ? 1.0 : 0.0);
                } else {
                    score.add(std::abs(knn_regress(dist[i], train_targets, cfg.k_values[q]) - (*ds.targets)[test[i]]));
                }
            }
            scores[q].push_back(score.value() / static_cast<double>(test.size()));
        }
    }
    for (std::size_t q = 0; q < cfg.k_values.size(); ++q)
        report.rows.push_back({cfg.k_values[q], mean_of(scores[q]), std_of(scores[q])});
    report.seconds = seconds_since(start);
    return report;
}

void write_knn_report(std::ostream& out, const KnnReport& report) {
    const auto old = out.precision(12);
    out << "k,metric,mean,std\n";
    for (const KnnRow& r : report.rows)
        out << r.k << ',' << (report.classification ? "accuracy" : "mae") << ',' << r.mean << ',' << r.std << '\n';
    out.precision(old);
}

Discrepancy parse_discrepancy(const std::string& name) {
    if (name == "flowalign") return Discrepancy::FlowAlign;
    if (name == "depthalign") return Discrepancy::DepthAlign;
    if (name == "tsfa") return Discrepancy::TreeSlicedFlow;
    if (name == "tsda") return Discrepancy::TreeSlicedDepth;
    if (name == "sgw") return Discrepancy::SlicedGW;
    throw InputError("unknown discrepancy '" + name + "' (expected flowalign, depthalign, tsfa, tsda or sgw)");
}

const char* discrepancy_name(Discrepancy d) {
    switch (d) {
        case Discrepancy::FlowAlign: return "flowalign";
        case Discrepancy::DepthAlign: return "depthalign";
        case Discrepancy::TreeSlicedFlow: return "tsfa";
        case Discrepancy::TreeSlicedDepth: return "tsda";
        case Discrepancy::SlicedGW: return "sgw";
    }
    return "?";
}

double evaluate_discrepancy(const WeightedPoints& a, const WeightedPoints& b, const BenchConfig& cfg) {
    switch (cfg.discrepancy) {
        case Discrepancy::FlowAlign:
        case Discrepancy::DepthAlign: {
            // Both sides share one sampler seed so the value is symmetric.
            SamplerConfig sc = cfg.spec.sampler;
            sc.seed = derive_seed(cfg.seed, streams::kMeasure, 0);
            const Embedding ea = sample_tree_metric(a.points, sc);
            const Embedding eb = sample_tree_metric(b.points, sc);
            const Measure ma = ea.measure(a.weights), mb = eb.measure(b.weights);
            const bool flow = cfg.discrepancy == Discrepancy::FlowAlign;
            if (cfg.aligned_root)
                return flow ? aligned_flow_align(ma, ea.tree, mb, eb.tree) : aligned_depth_align(ma, ea.tree, mb, eb.tree);
            return flow ? flow_align(ma, ea.tree, mb, eb.tree, cfg.search).value
                        : depth_align(ma, ea.tree, mb, eb.tree, cfg.search).value;
        }
        case Discrepancy::TreeSlicedFlow:
        case Discrepancy::TreeSlicedDepth:
        case Discrepancy::SlicedGW: {
            SliceSpec spec = cfg.spec;
            spec.seed = cfg.seed;
            spec.base = cfg.discrepancy == Discrepancy::TreeSlicedFlow    ? SliceBase::FlowAligned
                        : cfg.discrepancy == Discrepancy::TreeSlicedDepth ? SliceBase::DepthAligned
                                                                          : SliceBase::SlicedGW;
            return tree_sliced_discrepancy(a, b, spec, cfg.search.threads);
        }
    }
    throw InputError("unknown discrepancy");
}

BenchReport bench(const Dataset& ds, const BenchConfig& cfg) {
    const std::size_t n = ds.size();
    const std::size_t available = n * (n - 1) / 2;
    if (n < 2) throw InputError("bench: need at least two measures");
    if (cfg.pairs < 1 || cfg.pairs > available)
        throw InputError("bench: pairs must lie in [1, " + std::to_string(available) + "]");

    // Distinct unordered pairs drawn without replacement.
    std::mt19937_64 rng(derive_seed(cfg.seed, streams::kPairs));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (pairs.size() < cfg.pairs) {
        std::size_t a = rng() % n, b = rng() % n;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (seen.insert({a, b}).second) pairs.emplace_back(a, b);
    }

    BenchReport report;
    (void)evaluate_discrepancy(ds.measures[pairs.front().first], ds.measures[pairs.front().second], cfg);
    std::vector<double> times;
    for (const auto& [a, b] : pairs) {
        const auto start = Clock::now();
        const double v = evaluate_discrepancy(ds.measures[a], ds.measures[b], cfg);
        const double t = seconds_since(start);
        report.rows.push_back({a, b, v, t});
        times.push_back(t);
    }
    report.median_seconds = median_of(times);
    report.mean_seconds = mean_of(times);
    return report;
}

void write_bench_values(std::ostream& out, const BenchReport& report) {
    const auto old = out.precision(12);
    out << "pair,a,b,value\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        out << i << ',' << report.rows[i].a << ',' << report.rows[i].b << ',' << report.rows[i].value << '\n';
    out.precision(old);
}

void write_bench_timings(std::ostream& out, const BenchReport& report) {
    const auto old = out.precision(6);
    out << "pair,a,b,seconds\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        out << i << ',' << report.rows[i].a << ',' << report.rows[i].b << ',' << report.rows[i].seconds << '\n';
    out << "median,,," << report.median_seconds << '\n' << "mean,,," << report.mean_seconds << '\n';
    out.precision(old);
}

Dataset make_two_family_dataset(const SyntheticConfig& cfg) {
    if (cfg.measures < 2 || cfg.points < 1 || cfg.dim < 1) throw InputError("synthetic dataset: sizes must be positive");
    if (!(cfg.spread >= 0.0)) throw InputError("synthetic dataset: spread must be >= 0");
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(-cfg.shift, cfg.shift);
    std::vector<double> templates[2];
    for (int f = 0; f < 2; ++f) {
        templates[f].resize(cfg.points * cfg.dim);
        for (double& v : templates[f]) v = cfg.scales[f] * normal(rng);
    }
    Dataset ds;
    ds.labels.emplace();
    ds.targets.emplace();
    for (std::size_t m = 0; m < cfg.measures; ++m) {
        const int f = static_cast<int>(m % 2);
        std::vector<double> offset(cfg.dim);
        for (double& v : offset) v = uniform(rng);
        std::vector<double> coords(templates[f]);
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += offset[i % cfg.dim] + cfg.spread * normal(rng);
        ds.measures.push_back(WeightedPoints::uniform(PointSet(cfg.dim, std::move(coords))));
        ds.labels->push_back(f);
        ds.targets->push_back(cfg.scales[f]);
    }
    return ds;
}

}  // namespace treealign
