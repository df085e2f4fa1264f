#include "treealign/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/univariate_ot.hpp"

namespace treealign {
namespace {

void validate(std::span<const FlowProfile> profiles, std::span<const double> p) {
    if (profiles.empty()) throw InputError("barycenter: no profiles");
    if (p.size() != profiles.size()) throw InputError("barycenter: need one weight per profile");
    double total = 0.0;
    for (double w : p) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("barycenter: weights must be finite and >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("barycenter: weights must sum to 1");
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (!profiles[i].is_valid(1e-9)) throw InputError("barycenter: profile " + std::to_string(i) + " is not a valid flow profile");
}

}  // namespace

FlowProfile FlowBarycenter::profile() const {
    FlowProfile f;
    f.lengths = lengths;
    f.masses = masses;
    return f;
}

double barycenter_objective(std::span<const FlowProfile> profiles, std::span<const double> p,
                            const FlowProfile& barycenter) {
    CompensatedSum total;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        total.add(p[i] * univariate_ot_cost(profiles[i], barycenter, LossKind::Squared));
    return total.value();
}

FlowBarycenter quantile_initialization(std::span<const FlowProfile> profiles, std::span<const double> p,
                                       std::size_t k) {
    validate(profiles, p);
    if (k == 0) throw InputError("barycenter: number of supports must be >= 1");
    struct Atom {
        double length;
        double mass;
    };
    std::vector<Atom> pooled;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t a = 0; a < profiles[i].size(); ++a)
            if (p[i] > 0.0) pooled.push_back({profiles[i].lengths[a], p[i] * profiles[i].masses[a]});
    std::stable_sort(pooled.begin(), pooled.end(), [](const Atom& a, const Atom& b) { return a.length < b.length; });

    FlowBarycenter b;
    b.lengths.reserve(k);
    b.masses.assign(k, 1.0 / static_cast<double>(k));
    std::size_t pos = 0;
    double cumulative = pooled.front().mass;
    for (std::size_t j = 0; j < k; ++j) {
        const double level = (static_cast<double>(j) + 0.5) / static_cast<double>(k);
        while (cumulative < level && pos + 1 < pooled.size()) cumulative += pooled[++pos].mass;
        b.lengths.push_back(pooled[pos].length);
    }
    return b;
}

BarycenterResult flow_barycenter(std::span<const FlowProfile> profiles, std::span<const double> p,
                                 const BarycenterOptions& options) {
    if (options.max_iter < 0) throw InputError("barycenter: max_iter must be >= 0");
    BarycenterResult r;
    r.barycenter = quantile_initialization(profiles, p, options.k);
    const std::size_t k = options.k;
    const double slot = 1.0 / static_cast<double>(k);
    r.objective_history.push_back(barycenter_objective(profiles, p, r.barycenter.profile()));

    for (int it = 0; it < options.max_iter; ++it) {
        // Barycentric projection: every support moves to the p-weighted mean
        // of the lengths its mass is sent to.
        std::vector<CompensatedSum> moved(k);
        const FlowProfile current = r.barycenter.profile();
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            if (p[i] == 0.0) continue;
            const OtResult ot = univariate_ot(current, profiles[i], LossKind::Squared);
            for (const PlanEntry& e : ot.plan.entries) moved[e.i].add(p[i] * e.mass * profiles[i].lengths[e.j]);
        }
        FlowBarycenter next = r.barycenter;
        for (std::size_t j = 0; j < k; ++j) next.lengths[j] = std::max(0.0, moved[j].value() / slot);
        std::sort(next.lengths.begin(), next.lengths.end());

        const double previous = r.objective_history.back();
        const double objective = barycenter_objective(profiles, p, next.profile());
        if (objective > previous) break;
        r.barycenter = std::move(next);
        r.objective_history.push_back(objective);
        r.iterations = it + 1;
        if (previous - objective < options.tol) break;
    }
    return r;
}

}  // namespace treealign
