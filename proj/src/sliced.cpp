#include "treealign/sliced.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "treealign/depth_align.hpp"
#include "treealign/error.hpp"
#include "treealign/flow_align.hpp"
#include "treealign/numeric.hpp"
#include "treealign/parallel.hpp"
#include "treealign/simd/kernels.hpp"

namespace treealign {

void SliceSpec::validate() const {
    if (n_slices < 1) throw InputError("number of slices must be >= 1");
}

Embedding slice_tree(const PointSet& points, const SliceSpec& spec, int slice) {
    SamplerConfig c = spec.sampler;
    c.seed = derive_seed(spec.seed, streams::kSlice, static_cast<std::uint64_t>(slice));
    return sample_tree_metric(points, c);
}

namespace {

double gw_slices(const PointSet& x, const PointSet& y, int first, int count, std::uint64_t seed);

double sliced_gw_weighted(const WeightedPoints& mu, const WeightedPoints& nu, const SliceSpec& spec, int slice) {
    const std::size_t n = std::max(mu.size(), nu.size());
    const WeightedPoints a = zero_pad(mu, n);
    const WeightedPoints b = zero_pad(nu, n);
    const std::size_t dim = std::max(a.points.dim(), b.points.dim());
    return gw_slices(zero_extend(a.points, dim), zero_extend(b.points, dim), slice, 1, spec.seed);
}

std::vector<double> random_direction(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> dir(dim);
    double norm = 0.0;
    while (norm == 0.0) {
        norm = 0.0;
        for (double& v : dir) {
            v = normal(rng);
            norm += v * v;
        }
    }
    norm = std::sqrt(norm);
    for (double& v : dir) v /= norm;
    return dir;
}

double gw_slices(const PointSet& first_set, const PointSet& second_set, int first, int count, std::uint64_t seed) {
    // The moment sums are order dependent in floating point; evaluating the
    // pair in a canonical order makes the value exactly symmetric.
    const bool swap = std::lexicographical_compare(second_set.coords().begin(), second_set.coords().end(),
                                                   first_set.coords().begin(), first_set.coords().end());
    const PointSet& x = swap ? second_set : first_set;
    const PointSet& y = swap ? first_set : second_set;
    const std::size_t n = x.size();
    const std::size_t dim = x.dim();
    const auto& kernels = simd::active();
    std::vector<double> px(n), py(n), py_desc(n);
    CompensatedSum total;
    for (int s = first; s < first + count; ++s) {
        const std::vector<double> dir = random_direction(dim, derive_seed(seed, streams::kProjection, static_cast<std::uint64_t>(s)));
        kernels.project(x.data(), n, dim, dir.data(), px.data());
        kernels.project(y.data(), n, dim, dir.data(), py.data());
        std::sort(px.begin(), px.end());
        std::sort(py.begin(), py.end());
        std::reverse_copy(py.begin(), py.end(), py_desc.begin());
        const double asc = gw1d_moment_form(px, py);
        const double desc = gw1d_moment_form(px, py_desc);
        total.add(std::min(asc, desc) / (static_cast<double>(n) * static_cast<double>(n)));
    }
    return total.value();
}

}  // namespace

SlicedMeasure prepare_slices(const WeightedPoints& wp, const SliceSpec& spec) {
    spec.validate();
    if (wp.size() == 0) throw InputError("sliced discrepancy: empty point set");
    SlicedMeasure sm;
    sm.points = wp;
    if (spec.base == SliceBase::SlicedGW) return sm;
    const auto n = static_cast<std::size_t>(spec.n_slices);
    sm.trees.reserve(n);
    sm.measures.reserve(n);
    sm.profiles.reserve(n);
    for (int s = 0; s < spec.n_slices; ++s) {
        sm.trees.push_back(slice_tree(wp.points, spec, s));
        sm.measures.push_back(sm.trees.back().measure(wp.weights));
        sm.profiles.push_back(flow_profile(sm.measures.back(), sm.trees.back().tree));
    }
    return sm;
}

double slice_value(const SlicedMeasure& a, const SlicedMeasure& b, const SliceSpec& spec, int slice) {
    const auto s = static_cast<std::size_t>(slice);
    switch (spec.base) {
        case SliceBase::FlowAligned:
            return wasserstein2(a.profiles.at(s), b.profiles.at(s));
        case SliceBase::DepthAligned:
            return aligned_depth_align(a.measures.at(s), a.trees.at(s).tree, b.measures.at(s), b.trees.at(s).tree);
        case SliceBase::SlicedGW:
            return sliced_gw_weighted(a.points, b.points, spec, slice);
    }
    throw InputError("unknown slice base");
}

double sliced_discrepancy(const SlicedMeasure& a, const SlicedMeasure& b, const SliceSpec& spec) {
    CompensatedSum total;
    for (int s = 0; s < spec.n_slices; ++s) total.add(slice_value(a, b, spec, s));
    return total.value() / static_cast<double>(spec.n_slices);
}

std::vector<double> slice_values(const WeightedPoints& mu, const WeightedPoints& nu, const SliceSpec& spec,
                                 int threads) {
    const SlicedMeasure a = prepare_slices(mu, spec);
    const SlicedMeasure b = prepare_slices(nu, spec);
    std::vector<double> values(static_cast<std::size_t>(spec.n_slices));
    parallel_for(values.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) values[s] = slice_value(a, b, spec, static_cast<int>(s));
    });
    return values;
}

double tree_sliced_discrepancy(const WeightedPoints& mu, const WeightedPoints& nu, const SliceSpec& spec,
                               int threads) {
    const std::vector<double> values = slice_values(mu, nu, spec, threads);
    return compensated_sum(values) / static_cast<double>(values.size());
}

double gw1d_moment_form(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("1-D GW: both sides need the same number of points");
    const std::size_t n = x.size();
    if (n == 0) return 0.0;
    // Center both sides; the objective only sees differences and the moments
    // are better conditioned around zero.
    const double mx = compensated_sum(x) / static_cast<double>(n);
    const double my = compensated_sum(y) / static_cast<double>(n);
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = x[i] - mx;
        cy[i] = y[i] - my;
    }
    const auto& kernels = simd::active();
    const simd::PowerSums a = kernels.power_sums(cx.data(), n);
    const simd::PowerSums b = kernels.power_sums(cy.data(), n);
    const simd::CrossMoments c = kernels.cross_moments(cx.data(), cy.data(), n);
    const double nn = static_cast<double>(n);
    // sum (x_i - x_j)^4
    const double xx = 2.0 * nn * a.s4 - 8.0 * a.s3 * a.s1 + 6.0 * a.s2 * a.s2;
    const double yy = 2.0 * nn * b.s4 - 8.0 * b.s3 * b.s1 + 6.0 * b.s2 * b.s2;
    // sum (x_i - x_j)^2 (y_i - y_j)^2
    const double xy = 2.0 * nn * c.x2y2 - 4.0 * c.x2y * b.s1 - 4.0 * c.xy2 * a.s1 + 2.0 * a.s2 * b.s2 +
                      4.0 * c.xy * c.xy;
    return std::max(0.0, xx + yy - 2.0 * xy);
}

double sliced_gw(const PointSet& x, const PointSet& y, int n_slices, std::uint64_t seed) {
    if (n_slices < 1) throw InputError("number of slices must be >= 1");
    if (x.size() != y.size())
        throw InputError("sliced GW: point sets have " + std::to_string(x.size()) + " and " + std::to_string(y.size()) +
                         " points; zero-pad the smaller one first");
    if (x.empty()) throw InputError("sliced GW: empty point set");
    const std::size_t dim = std::max(x.dim(), y.dim());
    return gw_slices(zero_extend(x, dim), zero_extend(y, dim), 0, n_slices, seed) / static_cast<double>(n_slices);
}

WeightedPoints zero_pad(const WeightedPoints& wp, std::size_t target_n) {
    if (target_n < wp.size())
        throw InputError("zero padding: target " + std::to_string(target_n) + " is below the current size " +
                         std::to_string(wp.size()));
    if (target_n == wp.size()) return wp;
    PointSet padded = wp.points;
    const std::vector<double> origin(wp.points.dim(), 0.0);
    while (padded.size() < target_n) padded.push_back(origin);
    return WeightedPoints::uniform(std::move(padded));
}

PointSet zero_extend(const PointSet& points, std::size_t dim) {
    if (dim < points.dim()) throw InputError("zero extension: target dimension is below the current one");
    if (dim == points.dim()) return points;
    std::vector<double> coords(points.size() * dim, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) std::copy(points.row(i).begin(), points.row(i).end(), coords.begin() + static_cast<std::ptrdiff_t>(i * dim));
    return PointSet(dim, std::move(coords));
}

}  // namespace treealign
