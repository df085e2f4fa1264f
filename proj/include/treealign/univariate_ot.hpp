#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "treealign/tree.hpp"

namespace treealign {

enum class LossKind { Absolute, Squared };

struct PlanEntry {
    std::size_t i;
    std::size_t j;
    double mass;
};

// Sparse coupling between a source with `rows` atoms and a target with `cols`.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<PlanEntry> entries;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
};

struct OtResult {
    double cost = 0.0;  // for Squared this is the squared discrepancy
    TransportPlan plan;
};

// Closed-form 1-D optimal transport between sorted profiles by the monotone
// two-pointer sweep. Throws InputError on unsorted input or total masses that
// differ by more than 1e-9.
OtResult univariate_ot(const FlowProfile& mu, const FlowProfile& nu, LossKind loss);

// Same sweep without materializing the plan.
double univariate_ot_cost(std::span<const double> x, std::span<const double> a, std::span<const double> z,
                          std::span<const double> b, LossKind loss);
double univariate_ot_cost(const FlowProfile& mu, const FlowProfile& nu, LossKind loss);

// sqrt of the squared-loss cost: the 2-Wasserstein distance of the profiles.
double wasserstein2(const FlowProfile& mu, const FlowProfile& nu);

// k-way merge of individually sorted runs; equal keys keep (run, position) order.
std::vector<double> monotone_merge(std::span<const std::vector<double>> sorted_runs);

// "i j mass" per line.
void write_plan(std::ostream& out, const TransportPlan& plan);

}  // namespace treealign
