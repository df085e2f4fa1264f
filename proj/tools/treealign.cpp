// Command-line front end: tree sampling, discrepancies, kNN, k-means,
// benchmarks and figure data.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <random>
#include <variant>

#include "treealign/clustering.hpp"
#include "treealign/dataset.hpp"
#include "treealign/depth_align.hpp"
#include "treealign/error.hpp"
#include "treealign/experiment.hpp"
#include "treealign/flow_align.hpp"
#include "treealign/numeric.hpp"
#include "treealign/sampling.hpp"
#include "treealign/simd/kernels.hpp"
#include "treealign/sliced.hpp"

namespace ta = treealign;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

struct SamplerArgs {
    int kappa = 4;
    int depth = 6;
    std::string root = "mean";
    std::string init = "random";

    ta::SamplerConfig config(std::uint64_t seed) const {
        ta::SamplerConfig c;
        c.num_clusters = kappa;
        c.max_depth = depth;
        c.seed = seed;
        if (root == "mean") {
            c.root_mode = ta::RootMode::MeanOfSupports;
        } else if (root.rfind("fixed:", 0) == 0) {
            c.root_mode = ta::RootMode::FixedPoint;
            std::stringstream ss(root.substr(6));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    std::size_t used = 0;
                    c.root_point.push_back(std::stod(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw ta::InputError("--root: malformed coordinate '" + tok + "'");
                }
            }
            if (c.root_point.empty()) throw ta::InputError("--root fixed: needs coordinates");
        } else {
            throw ta::InputError("--root must be 'mean' or 'fixed:<x,y,...>'");
        }
        if (init == "random") c.init_rule = ta::InitRule::Random;
        else if (init == "first") c.init_rule = ta::InitRule::FirstPoint;
        else throw ta::InputError("--init must be 'random' or 'first'");
        return c;
    }
};

void add_sampler_options(CLI::App* sub, SamplerArgs& s) {
    sub->add_option("--kappa", s.kappa, "Clusters per tree node")->capture_default_str();
    sub->add_option("--depth", s.depth, "Maximum tree depth (root is depth 1)")->capture_default_str();
    sub->add_option("--root", s.root, "Root placement: mean | fixed:<x,y,...>")->capture_default_str();
    sub->add_option("--init", s.init, "First farthest-point center: random | first")->capture_default_str();
}

ta::RootStrategy parse_strategy(const std::string& s) {
    if (s == "incremental") return ta::RootStrategy::Incremental;
    if (s == "brute") return ta::RootStrategy::BruteForce;
    throw ta::InputError("--strategy must be 'brute' or 'incremental'");
}

// Writes through `fn` to the --out file, or to stdout when none is given.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw ta::InputError("cannot write " + path);
    fn(out);
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ta::InputError("cannot open " + path);
    return in;
}

// A `dist` operand: either a tree with a measure or raw weighted points.
using Operand = std::variant<ta::TreeMeasure, ta::WeightedPoints>;

Operand read_operand(const std::string& path, bool weighted) {
    std::ifstream in = open_input(path);
    std::string line, first;
    while (first.empty() && std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream(line) >> first;
    }
    in.clear();
    in.seekg(0);
    if (first == "tree") return ta::read_tree_measure(in);
    return ta::read_points(in, weighted, &path);
}

const ta::WeightedPoints& as_points(const Operand& op, const std::string& path) {
    if (const auto* wp = std::get_if<ta::WeightedPoints>(&op)) return *wp;
    throw ta::InputError(path + ": this discrepancy needs a point-set file, not a tree");
}

ta::TreeMeasure as_tree(const Operand& op, const ta::SamplerConfig& sampler) {
    if (const auto* tm = std::get_if<ta::TreeMeasure>(&op)) return *tm;
    const auto& wp = std::get<ta::WeightedPoints>(op);
    ta::Embedding e = ta::sample_tree_metric(wp.points, sampler);
    ta::Measure m = e.measure(wp.weights);
    return {std::move(e.tree), std::move(m)};
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree-metric alignment discrepancies between probability measures"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output file (default: stdout)");

    // sample-tree
    auto* sample = app.add_subcommand("sample-tree", "Embed a point set into a sampled tree metric");
    std::string sample_points;
    bool sample_weighted = false;
    SamplerArgs sample_args;
    sample->add_option("--points", sample_points, "Point-set file")->required();
    sample->add_flag("--weighted", sample_weighted, "First column of every row is a weight");
    add_sampler_options(sample, sample_args);

    // dist
    auto* dist = app.add_subcommand("dist", "Discrepancy between two measures");
    std::string dist_kind, dist_a, dist_b, dist_strategy = "incremental";
    bool dist_weighted = false, dist_aligned = false, dist_internal = false;
    int dist_slices = 10;
    SamplerArgs dist_args;
    dist->add_option("kind", dist_kind, "flowalign | depthalign | tsfa | tsda | sgw")
        ->required()
        ->check(CLI::IsMember({"flowalign", "depthalign", "tsfa", "tsda", "sgw"}));
    dist->add_option("--a", dist_a, "First measure (point set or tree measure)")->required();
    dist->add_option("--b", dist_b, "Second measure (point set or tree measure)")->required();
    dist->add_flag("--weighted", dist_weighted, "Point files carry a leading weight column");
    dist->add_flag("--aligned-root", dist_aligned, "Use the given roots instead of searching");
    dist->add_flag("--internal-roots", dist_internal, "Search internal nodes only");
    dist->add_option("--strategy", dist_strategy, "Root search: brute | incremental")->capture_default_str();
    dist->add_option("--slices", dist_slices, "Slices for tsfa/tsda/sgw")->capture_default_str();
    add_sampler_options(dist, dist_args);

    // knn
    auto* knn = app.add_subcommand("knn", "k-nearest-neighbour experiment on a dataset");
    std::string knn_data, knn_disc = "tsfa";
    std::vector<int> knn_k{1};
    int knn_repeats = 20, knn_slices = 10;
    double knn_split = 0.8;
    SamplerArgs knn_args;
    knn->add_option("--data", knn_data, "Dataset manifest or directory")->required();
    knn->add_option("--discrepancy", knn_disc, "tsfa | tsda | sgw")
        ->check(CLI::IsMember({"tsfa", "tsda", "sgw"}))
        ->capture_default_str();
    knn->add_option("--k", knn_k, "Neighbour counts, comma separated")->delimiter(',')->capture_default_str();
    knn->add_option("--repeats", knn_repeats, "Random splits")->capture_default_str();
    knn->add_option("--split", knn_split, "Training fraction")->capture_default_str();
    knn->add_option("--slices", knn_slices, "Tree or projection slices")->capture_default_str();
    add_sampler_options(knn, knn_args);

    // kmeans
    auto* km = app.add_subcommand("kmeans", "k-means clustering with flow barycenters");
    std::string km_data;
    std::size_t km_clusters = 2, km_supports = 100;
    int km_slices = 10, km_iter = 50;
    SamplerArgs km_args;
    km->add_option("--data", km_data, "Dataset manifest or directory")->required();
    km->add_option("--clusters", km_clusters, "Number of clusters")->capture_default_str();
    km->add_option("--slices", km_slices, "Tree slices")->capture_default_str();
    km->add_option("--supports", km_supports, "Barycenter supports")->capture_default_str();
    km->add_option("--max-iter", km_iter, "Lloyd iterations")->capture_default_str();
    add_sampler_options(km, km_args);

    // bench
    auto* bn = app.add_subcommand("bench", "Time discrepancy evaluations over random pairs");
    std::string bn_data, bn_disc = "flowalign", bn_strategy = "incremental", bn_timing;
    std::size_t bn_pairs = 10;
    bool bn_aligned = false, bn_internal = false;
    int bn_slices = 10;
    SamplerArgs bn_args;
    bn->add_option("--data", bn_data, "Dataset manifest or directory")->required();
    bn->add_option("--discrepancy", bn_disc, "flowalign | depthalign | tsfa | tsda | sgw")->capture_default_str();
    bn->add_option("--pairs", bn_pairs, "Number of measure pairs")->capture_default_str();
    bn->add_option("--strategy", bn_strategy, "Root search: brute | incremental")->capture_default_str();
    bn->add_flag("--aligned-root", bn_aligned, "Skip the root search");
    bn->add_flag("--internal-roots", bn_internal, "Search internal nodes only");
    bn->add_option("--slices", bn_slices, "Slices for tsfa/tsda/sgw")->capture_default_str();
    bn->add_option("--timing-out", bn_timing, "Timing CSV (default: summary on stderr)");
    add_sampler_options(bn, bn_args);

    // emit-figure-data
    auto* fig = app.add_subcommand("emit-figure-data", "CSV series of discrepancies under perturbations");
    std::string fig_kind = "noise";
    std::size_t fig_points = 30;
    int fig_slices = 10;
    SamplerArgs fig_args;
    fig->add_option("--kind", fig_kind, "noise | rotation")
        ->check(CLI::IsMember({"noise", "rotation"}))
        ->capture_default_str();
    fig->add_option("--points", fig_points, "Points per cloud")->capture_default_str();
    fig->add_option("--slices", fig_slices, "Slices per discrepancy")->capture_default_str();
    add_sampler_options(fig, fig_args);

    // synth
    auto* syn = app.add_subcommand("synth", "Write a synthetic two-family dataset");
    std::string syn_dir;
    ta::SyntheticConfig syn_cfg;
    syn->add_option("--dir", syn_dir, "Output directory")->required();
    syn->add_option("--measures", syn_cfg.measures, "Number of measures")->capture_default_str();
    syn->add_option("--points", syn_cfg.points, "Points per measure")->capture_default_str();
    syn->add_option("--dim", syn_cfg.dim, "Ambient dimension")->capture_default_str();
    syn->add_option("--spread", syn_cfg.spread, "Within-family noise level")->capture_default_str();
    syn->add_option("--scale-a", syn_cfg.scales[0], "Scale of family 0")->capture_default_str();
    syn->add_option("--scale-b", syn_cfg.scales[1], "Scale of family 1")->capture_default_str();

    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sample) {
            std::ifstream in = open_input(sample_points);
            const ta::WeightedPoints wp = ta::read_points(in, sample_weighted, &sample_points);
            ta::Embedding e = ta::sample_tree_metric(wp.points, sample_args.config(g.seed));
            const ta::TreeMeasure tm{e.tree, e.measure(wp.weights)};
            emit(g.out, [&](std::ostream& o) { ta::write_tree_measure(o, tm); });
        } else if (*dist) {
            const Operand a = read_operand(dist_a, dist_weighted);
            const Operand b = read_operand(dist_b, dist_weighted);
            double value = 0.0;
            if (dist_kind == "flowalign" || dist_kind == "depthalign") {
                // Both operands share one sampler seed so swapping them is exact.
                const ta::SamplerConfig sc = dist_args.config(ta::derive_seed(g.seed, ta::streams::kMeasure, 0));
                const ta::TreeMeasure x = as_tree(a, sc), z = as_tree(b, sc);
                ta::RootSearchOptions opts;
                opts.strategy = parse_strategy(dist_strategy);
                opts.internal_roots_only = dist_internal;
                opts.threads = g.threads;
                const bool flow = dist_kind == "flowalign";
                if (dist_aligned)
                    value = flow ? ta::aligned_flow_align(x.measure, x.tree, z.measure, z.tree)
                                 : ta::aligned_depth_align(x.measure, x.tree, z.measure, z.tree);
                else
                    value = flow ? ta::flow_align(x.measure, x.tree, z.measure, z.tree, opts).value
                                 : ta::depth_align(x.measure, x.tree, z.measure, z.tree, opts).value;
            } else {
                ta::SliceSpec spec;
                spec.n_slices = dist_slices;
                spec.seed = g.seed;
                spec.sampler = dist_args.config(g.seed);
                spec.base = dist_kind == "tsfa"   ? ta::SliceBase::FlowAligned
                            : dist_kind == "tsda" ? ta::SliceBase::DepthAligned
                                                  : ta::SliceBase::SlicedGW;
                value = ta::tree_sliced_discrepancy(as_points(a, dist_a), as_points(b, dist_b), spec, g.threads);
            }
            emit(g.out, [&](std::ostream& o) { o << format_value(value) << '\n'; });
        } else if (*knn) {
            const ta::Dataset ds = ta::load_dataset(knn_data);
            ta::ExperimentConfig cfg;
            cfg.spec.n_slices = knn_slices;
            cfg.spec.seed = ta::derive_seed(g.seed, ta::streams::kSlice);
            cfg.spec.sampler = knn_args.config(g.seed);
            cfg.spec.base = knn_disc == "tsfa"   ? ta::SliceBase::FlowAligned
                            : knn_disc == "tsda" ? ta::SliceBase::DepthAligned
                                                 : ta::SliceBase::SlicedGW;
            cfg.k_values = knn_k;
            cfg.train_fraction = knn_split;
            cfg.repeats = knn_repeats;
            cfg.seed = g.seed;
            cfg.threads = g.threads;
            const ta::KnnReport report = ta::knn_experiment(ds, cfg);
            emit(g.out, [&](std::ostream& o) { ta::write_knn_report(o, report); });
            std::cerr << "# " << knn_disc << " wall time " << report.seconds << " s\n";
        } else if (*km) {
            const ta::Dataset ds = ta::load_dataset(km_data);
            ta::KMeansOptions opts;
            opts.clusters = km_clusters;
            opts.supports = km_supports;
            opts.max_iter = km_iter;
            opts.spec.n_slices = km_slices;
            opts.spec.seed = ta::derive_seed(g.seed, ta::streams::kSlice);
            opts.spec.sampler = km_args.config(g.seed);
            opts.seed = g.seed;
            opts.threads = g.threads;
            const ta::ClusteringResult r = ta::kmeans(ds.measures, opts);
            emit(g.out, [&](std::ostream& o) {
                o << "measure_id,cluster\n";
                for (std::size_t i = 0; i < r.assignment.size(); ++i) o << i << ',' << r.assignment[i] << '\n';
                o << "summary,inertia=" << format_value(r.inertia) << ",iterations=" << r.iterations;
                if (ds.labels) o << ",f_beta=" << format_value(ta::f_beta(r.assignment, *ds.labels));
                o << '\n';
            });
        } else if (*bn) {
            const ta::Dataset ds = ta::load_dataset(bn_data);
            ta::BenchConfig cfg;
            cfg.discrepancy = ta::parse_discrepancy(bn_disc);
            cfg.aligned_root = bn_aligned;
            cfg.search.strategy = parse_strategy(bn_strategy);
            cfg.search.internal_roots_only = bn_internal;
            cfg.search.threads = g.threads;
            cfg.spec.n_slices = bn_slices;
            cfg.spec.sampler = bn_args.config(g.seed);
            cfg.pairs = bn_pairs;
            cfg.seed = g.seed;
            const ta::BenchReport report = ta::bench(ds, cfg);
            emit(g.out, [&](std::ostream& o) { ta::write_bench_values(o, report); });
            if (!bn_timing.empty()) {
                emit(bn_timing, [&](std::ostream& o) { ta::write_bench_timings(o, report); });
            } else {
                std::cerr << "# " << bn_disc << " median " << report.median_seconds << " s, mean "
                          << report.mean_seconds << " s over " << report.rows.size() << " pairs\n";
            }
        } else if (*fig) {
            // A random cloud against perturbed copies of itself.
            std::mt19937_64 rng(ta::derive_seed(g.seed, ta::streams::kMeasure));
            std::normal_distribution<double> normal;
            std::vector<double> base(fig_points * 2);
            for (double& v : base) v = normal(rng);
            const ta::WeightedPoints cloud = ta::WeightedPoints::uniform(ta::PointSet(2, base));
            std::vector<double> noise(base.size());
            for (double& v : noise) v = normal(rng);

            ta::SliceSpec spec;
            spec.n_slices = fig_slices;
            spec.seed = g.seed;
            spec.sampler = fig_args.config(g.seed);
            auto value = [&](const ta::WeightedPoints& other, ta::SliceBase base_kind) {
                ta::SliceSpec s = spec;
                s.base = base_kind;
                return ta::tree_sliced_discrepancy(cloud, other, s, g.threads);
            };
            emit(g.out, [&](std::ostream& o) {
                o << (fig_kind == "noise" ? "sigma" : "degrees") << ",tsfa,tsda,sgw\n";
                for (int step = 0; step <= 12; ++step) {
                    std::vector<double> moved(base.size());
                    double param = 0.0;
                    if (fig_kind == "noise") {
                        param = 0.05 * step;
                        for (std::size_t i = 0; i < base.size(); ++i) moved[i] = base[i] + param * noise[i];
                    } else {
                        param = 15.0 * step;
                        const double t = param * std::acos(-1.0) / 180.0, c = std::cos(t), s = std::sin(t);
                        for (std::size_t i = 0; i < fig_points; ++i) {
                            moved[2 * i] = c * base[2 * i] - s * base[2 * i + 1];
                            moved[2 * i + 1] = s * base[2 * i] + c * base[2 * i + 1];
                        }
                    }
                    const ta::WeightedPoints other = ta::WeightedPoints::uniform(ta::PointSet(2, moved));
                    o << format_value(param) << ',' << format_value(value(other, ta::SliceBase::FlowAligned)) << ','
                      << format_value(value(other, ta::SliceBase::DepthAligned)) << ','
                      << format_value(value(other, ta::SliceBase::SlicedGW)) << '\n';
                }
            });
        } else if (*syn) {
            syn_cfg.seed = g.seed;
            ta::write_dataset(ta::make_two_family_dataset(syn_cfg), syn_dir);
        }
    } catch (const ta::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ta::DegenerateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
