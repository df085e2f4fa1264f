#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treealign/points.hpp"
#include "treealign/sampling.hpp"
#include "treealign/tree.hpp"

namespace treealign {

enum class SliceBase {
    FlowAligned,   // aligned-root FlowAlign on sampled trees
    DepthAligned,  // aligned-root DepthAlign on sampled trees
    SlicedGW,      // sliced Gromov-Wasserstein on random 1-D projections
};

struct SliceSpec {
    int n_slices = 10;
    SliceBase base = SliceBase::FlowAligned;
    SamplerConfig sampler;  // tree slices; its seed is ignored in favour of `seed`
    std::uint64_t seed = 0;

    void validate() const;
};

// The tree of slice s for a point set. Depends only on the points, the spec
// and s, so both arguments of a discrepancy get trees drawn the same way.
Embedding slice_tree(const PointSet& points, const SliceSpec& spec, int slice);

// A weighted point set together with its per-slice trees, tree measures and
// flow profiles, so repeated comparisons sample each tree once.
struct SlicedMeasure {
    WeightedPoints points;
    std::vector<Embedding> trees;     // empty for SlicedGW
    std::vector<Measure> measures;    // measure on trees[s]
    std::vector<FlowProfile> profiles;  // flow profile of measures[s]
};

SlicedMeasure prepare_slices(const WeightedPoints& wp, const SliceSpec& spec);

// Base discrepancy of one slice between prepared measures.
double slice_value(const SlicedMeasure& a, const SlicedMeasure& b, const SliceSpec& spec, int slice);

// Mean over all slices between prepared measures.
double sliced_discrepancy(const SlicedMeasure& a, const SlicedMeasure& b, const SliceSpec& spec);

// Per-slice base discrepancies between two weighted point sets.
std::vector<double> slice_values(const WeightedPoints& mu, const WeightedPoints& nu, const SliceSpec& spec,
                                 int threads = 1);

// Mean of slice_values (compensated sum divided by the slice count).
double tree_sliced_discrepancy(const WeightedPoints& mu, const WeightedPoints& nu, const SliceSpec& spec,
                               int threads = 1);

// sum_{i,j} ((x_i - x_j)^2 - (y_i - y_j)^2)^2 for the pairing x_i <-> y_i,
// evaluated from power sums and cross moments in O(n).
double gw1d_moment_form(std::span<const double> x, std::span<const double> y);

// Mean over random unit directions of the 1-D GW cost between the projected
// point sets under uniform weights; each slice takes the cheaper of the
// ascending/ascending and ascending/descending pairings. Sizes must match;
// differing dimensions are zero-extended to the larger one.
double sliced_gw(const PointSet& x, const PointSet& y, int n_slices, std::uint64_t seed);

// Appends origin points up to target_n; weights become uniform.
WeightedPoints zero_pad(const WeightedPoints& wp, std::size_t target_n);

// Same points with extra zero coordinates up to dim.
PointSet zero_extend(const PointSet& points, std::size_t dim);

}  // namespace treealign
