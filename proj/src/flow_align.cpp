#include "treealign/flow_align.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treealign/detail/best_pair.hpp"
#include "treealign/detail/merge.hpp"
#include "treealign/error.hpp"
#include "treealign/numeric.hpp"
#include "treealign/parallel.hpp"

namespace treealign {
namespace {

struct Atom {
    double length;
    double mass;
    std::size_t origin;
};

FlowProfile to_profile(const std::vector<Atom>& atoms) {
    FlowProfile p;
    p.lengths.reserve(atoms.size());
    p.masses.reserve(atoms.size());
    p.origin.reserve(atoms.size());
    for (const Atom& a : atoms) {
        p.lengths.push_back(a.length);
        p.masses.push_back(a.mass);
        p.origin.push_back(a.origin);
    }
    return p;
}

bool by_length_then_origin(const Atom& a, const Atom& b) {
    return a.length < b.length || (a.length == b.length && a.origin < b.origin);
}

// Puts a merged sequence into the canonical (length, origin) order that a
// full stable sort would produce. Equal-length blocks are re-sorted by origin;
// if rounding broke monotonicity inside a run the whole thing is re-sorted.
void canonicalize(std::vector<Atom>& atoms) {
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i].length < atoms[i - 1].length) {
            std::sort(atoms.begin(), atoms.end(), by_length_then_origin);
            return;
        }
    }
    std::size_t begin = 0;
    while (begin < atoms.size()) {
        std::size_t end = begin + 1;
        while (end < atoms.size() && atoms[end].length == atoms[begin].length) ++end;
        if (end - begin > 1)
            std::sort(atoms.begin() + static_cast<std::ptrdiff_t>(begin), atoms.begin() + static_cast<std::ptrdiff_t>(end),
                      [](const Atom& a, const Atom& b) { return a.origin < b.origin; });
        begin = end;
    }
}

RootSearchResult to_result(const detail::BestPair& b) { return {b.value, b.rx, b.rz}; }

}  // namespace

double aligned_flow_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z) {
    return wasserstein2(flow_profile(mu, tree_x), flow_profile(nu, tree_z));
}

OtResult aligned_flow_align_plan(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z) {
    const FlowProfile p = flow_profile(mu, tree_x);
    const FlowProfile q = flow_profile(nu, tree_z);
    OtResult r = univariate_ot(p, q, LossKind::Squared);
    r.plan.rows = mu.size();
    r.plan.cols = nu.size();
    for (auto& e : r.plan.entries) {
        e.i = p.origin[e.i];
        e.j = q.origin[e.j];
    }
    return r;
}

std::vector<NodeId> candidate_roots(const Tree& tree, bool internal_only) {
    std::vector<NodeId> roots;
    roots.reserve(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) {
        const auto id = static_cast<NodeId>(v);
        if (!internal_only || !tree.is_leaf(id) || tree.size() == 1) roots.push_back(id);
    }
    return roots;
}

std::vector<FlowProfile> rerooted_profiles(const Measure& measure, const Tree& tree, std::span<const NodeId> roots) {
    measure.check_on(tree);
    for (NodeId r : roots) tree.check_node(r);

    const FlowProfile base = flow_profile(measure, tree);
    const std::size_t n = base.size();
    std::vector<NodeId> node_of(n);
    for (std::size_t p = 0; p < n; ++p) node_of[p] = measure.support(base.origin[p]);

    std::vector<int> path_pos(tree.size(), -1);
    std::vector<FlowProfile> out;
    out.reserve(roots.size());
    std::vector<std::vector<Atom>> runs;

    for (NodeId new_root : roots) {
        const std::vector<NodeId> path = root_path(tree, new_root);
        for (std::size_t k = 0; k < path.size(); ++k) path_pos[path[k]] = static_cast<int>(k);
        const std::size_t last = path.size() - 1;
        const double shift = tree.root_distance(new_root);

        // runs[k]: supports whose closest path node is path[k] (k == 0 keeps
        // the base order shifted up, k == last is the subtree of the new
        // root shifted down, others are the off-path groups). runs[last + 1]
        // holds supports sitting on the path above the new root, whose order
        // flips.
        runs.assign(path.size() + 1, {});
        for (std::size_t p = 0; p < n; ++p) {
            const NodeId x = node_of[p];
            NodeId zeta = x;
            while (path_pos[zeta] < 0) zeta = tree.parent(zeta);
            const auto k = static_cast<std::size_t>(path_pos[zeta]);
            const double len =
                x == new_root ? 0.0 : shift + tree.root_distance(x) - 2.0 * tree.root_distance(zeta);
            const Atom atom{len, base.masses[p], base.origin[p]};
            if (k < last && x == zeta)
                runs[last + 1].push_back(atom);
            else
                runs[k].push_back(atom);
        }
        std::reverse(runs[last + 1].begin(), runs[last + 1].end());

        std::size_t nonempty = 0;
        for (const auto& r : runs) nonempty += r.empty() ? 0 : 1;
        std::vector<Atom> merged;
        if (nonempty <= 1) {
            for (auto& r : runs)
                if (!r.empty()) merged = std::move(r);
        } else if (2 * nonempty > n + 2) {
            // Mostly singleton runs: a plain sort is cheaper than the heap.
            merged.reserve(n);
            for (const auto& r : runs) merged.insert(merged.end(), r.begin(), r.end());
            std::sort(merged.begin(), merged.end(), by_length_then_origin);
        } else {
            merged = detail::merge_runs(std::span<const std::vector<Atom>>(runs), [](const Atom& a) { return a.length; });
        }
        canonicalize(merged);
        out.push_back(to_profile(merged));

        for (NodeId v : path) path_pos[v] = -1;
    }
    return out;
}

RootSearchResult flow_align(const Measure& mu, const Tree& tree_x, const Measure& nu, const Tree& tree_z,
                            const RootSearchOptions& options) {
    mu.check_on(tree_x);
    nu.check_on(tree_z);
    const std::vector<NodeId> roots_x = candidate_roots(tree_x, options.internal_roots_only);
    const std::vector<NodeId> roots_z = candidate_roots(tree_z, options.internal_roots_only);
    const int workers = std::max(1, options.threads);
    std::vector<detail::BestPair> partial(static_cast<std::size_t>(workers));

    if (options.strategy == RootStrategy::BruteForce) {
        const std::size_t chunk = (roots_x.size() + workers - 1) / workers;
        parallel_for(roots_x.size(), workers, [&](std::size_t begin, std::size_t end) {
            detail::BestPair& best = partial[chunk == 0 ? 0 : begin / chunk];
            for (std::size_t a = begin; a < end; ++a) {
                for (NodeId rz : roots_z) {
                    const FlowProfile p = flow_profile(mu, tree_x, roots_x[a]);
                    const FlowProfile q = flow_profile(nu, tree_z, rz);
                    best.offer(wasserstein2(p, q), roots_x[a], rz);
                }
            }
        });
        return to_result(detail::BestPair::reduce(partial));
    }

    const std::vector<FlowProfile> px = rerooted_profiles(mu, tree_x, roots_x);
    const std::vector<FlowProfile> pz = rerooted_profiles(nu, tree_z, roots_z);
    const std::size_t chunk = (roots_x.size() + workers - 1) / workers;
    parallel_for(roots_x.size(), workers, [&](std::size_t begin, std::size_t end) {
        detail::BestPair& best = partial[chunk == 0 ? 0 : begin / chunk];
        for (std::size_t a = begin; a < end; ++a)
            for (std::size_t b = 0; b < roots_z.size(); ++b)
                best.offer(wasserstein2(px[a], pz[b]), roots_x[a], roots_z[b]);
    });
    return to_result(detail::BestPair::reduce(partial));
}

double gw_objective(const TransportPlan& plan, const Measure& mu, const Tree& tree_x, const Measure& nu,
                    const Tree& tree_z) {
    mu.check_on(tree_x);
    nu.check_on(tree_z);
    if (plan.rows != mu.size() || plan.cols != nu.size()) throw InputError("gw objective: plan shape does not match measures");
    for (const auto& e : plan.entries)
        if (e.i >= plan.rows || e.j >= plan.cols || e.mass < 0.0) throw InputError("gw objective: invalid plan entry");
    const auto rows = plan.row_sums();
    const auto cols = plan.col_sums();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::abs(rows[i] - mu.weight(i)) > 1e-9) throw InputError("gw objective: plan row marginal does not match mu");
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (std::abs(cols[j] - nu.weight(j)) > 1e-9) throw InputError("gw objective: plan column marginal does not match nu");

    CompensatedSum total;
    for (const auto& e : plan.entries) {
        for (const auto& f : plan.entries) {
            const double dx = tree_distance(tree_x, mu.support(e.i), mu.support(f.i));
            const double dz = tree_distance(tree_z, nu.support(e.j), nu.support(f.j));
            const double diff = dx - dz;
            total.add(diff * diff * e.mass * f.mass);
        }
    }
    return total.value();
}

}  // namespace treealign
