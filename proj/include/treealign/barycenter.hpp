#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treealign/tree.hpp"

namespace treealign {

// Barycenter in flow-length space: sorted lengths with their masses.
struct FlowBarycenter {
    std::vector<double> lengths;
    std::vector<double> masses;

    FlowProfile profile() const;
};

struct BarycenterOptions {
    std::size_t k = 100;  // number of supports; masses are fixed at 1/k
    int max_iter = 100;
    double tol = 1e-12;   // stop once the objective drops by less than this
};

struct BarycenterResult {
    FlowBarycenter barycenter;
    // Objective at the initialization and after every accepted update.
    std::vector<double> objective_history;
    int iterations = 0;

    double objective() const { return objective_history.back(); }
};

// sum_i p_i * W2^2(profile_i, barycenter).
double barycenter_objective(std::span<const FlowProfile> profiles, std::span<const double> p,
                            const FlowProfile& barycenter);

// Quantile initialization at levels (j + 1/2)/k of the p-weighted pooled profile.
FlowBarycenter quantile_initialization(std::span<const FlowProfile> profiles, std::span<const double> p,
                                       std::size_t k);

// Free-support barycenter with fixed uniform masses. Alternates monotone
// plans to every profile with barycentric-projection support updates and
// keeps an update only if it does not increase the objective.
BarycenterResult flow_barycenter(std::span<const FlowProfile> profiles, std::span<const double> p,
                                 const BarycenterOptions& options = {});

}  // namespace treealign
