#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace support {

using treealign::LossKind;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Tree random_tree(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<NodeId> parent(n, treealign::kNoParent);
    std::vector<double> length(n, 0.0);
    for (std::size_t v = 1; v < n; ++v) {
        parent[v] = static_cast<NodeId>(uniform_index(rng, v));
        length[v] = uniform(rng, lo, hi);
    }
    return Tree::from_parents(parent, length);
}

Tree random_star(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<NodeId> parent(n, 0);
    std::vector<double> length(n, 0.0);
    parent[0] = treealign::kNoParent;
    for (std::size_t v = 1; v < n; ++v) length[v] = uniform(rng, lo, hi);
    return Tree::from_parents(parent, length);
}

Measure random_measure(Rng& rng, const Tree& tree, std::size_t k) {
    std::vector<NodeId> nodes(tree.size());
    std::iota(nodes.begin(), nodes.end(), 0);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(std::min(k, nodes.size()));
    std::vector<double> w(nodes.size());
    for (double& x : w) x = uniform(rng, 0.05, 1.0);
    return Measure::normalized(nodes, w);
}

Measure uniform_measure_on(Rng& rng, std::span<const NodeId> candidates, std::size_t k) {
    std::vector<NodeId> nodes(candidates.begin(), candidates.end());
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(std::min(k, nodes.size()));
    return Measure::normalized(nodes, std::vector<double>(nodes.size(), 1.0));
}

PointSet random_cloud(Rng& rng, std::size_t n, std::size_t dim, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<double> c(n * dim);
    for (double& v : c) v = normal(rng);
    return PointSet(dim, c);
}

PointSet RigidMotion::apply(const PointSet& p) const {
    std::vector<double> out(p.size() * dim);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t r = 0; r < dim; ++r) {
            double s = shift[r];
            for (std::size_t c = 0; c < dim; ++c) s += q[r * dim + c] * p.row(i)[c];
            out[i * dim + r] = s;
        }
    return PointSet(dim, out);
}

RigidMotion random_motion(Rng& rng, std::size_t dim, double shift_scale) {
    std::normal_distribution<double> normal;
    RigidMotion m;
    m.dim = dim;
    m.q.assign(dim * dim, 0.0);
    // Gram-Schmidt on Gaussian rows.
    for (std::size_t r = 0; r < dim; ++r) {
        std::vector<double> v(dim);
        for (double& x : v) x = normal(rng);
        for (std::size_t p = 0; p < r; ++p) {
            double d = 0.0;
            for (std::size_t c = 0; c < dim; ++c) d += v[c] * m.q[p * dim + c];
            for (std::size_t c = 0; c < dim; ++c) v[c] -= d * m.q[p * dim + c];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (std::size_t c = 0; c < dim; ++c) m.q[r * dim + c] = v[c] / norm;
    }
    m.shift.resize(dim);
    for (double& s : m.shift) s = shift_scale * normal(rng);
    return m;
}

FlowProfile RationalProfile::profile() const {
    std::vector<double> masses(numerators.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
        masses[i] = static_cast<double>(numerators[i]) / static_cast<double>(denominator);
    return treealign::make_flow_profile(lengths, masses);
}

RationalProfile random_rational_profile(Rng& rng, std::size_t max_atoms, long long denominator) {
    RationalProfile p;
    p.denominator = denominator;
    const std::size_t atoms = 1 + uniform_index(rng, std::min<std::size_t>(max_atoms, static_cast<std::size_t>(denominator)));
    // Random composition of the denominator into `atoms` positive parts.
    std::vector<long long> cuts;
    std::vector<long long> all(static_cast<std::size_t>(denominator - 1));
    std::iota(all.begin(), all.end(), 1LL);
    std::shuffle(all.begin(), all.end(), rng);
    cuts.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(atoms - 1));
    cuts.push_back(0);
    cuts.push_back(denominator);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) p.numerators.push_back(cuts[i + 1] - cuts[i]);
    for (std::size_t i = 0; i < atoms; ++i) p.lengths.push_back(std::round(uniform(rng, 0.0, 10.0) * 1000.0) / 1000.0);
    std::sort(p.lengths.begin(), p.lengths.end());
    return p;
}

std::vector<std::vector<double>> floyd_warshall(const Tree& tree) {
    const std::size_t n = tree.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t v = 0; v < n; ++v) {
        d[v][v] = 0.0;
        const NodeId p = tree.parent(static_cast<NodeId>(v));
        if (p != treealign::kNoParent) d[v][p] = d[p][v] = tree.edge_length(static_cast<NodeId>(v));
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

NodeId lca_by_paths(const Tree& tree, NodeId u, NodeId v) {
    std::vector<NodeId> pu, pv;
    for (NodeId x = u; x != treealign::kNoParent; x = tree.parent(x)) pu.push_back(x);
    for (NodeId x = v; x != treealign::kNoParent; x = tree.parent(x)) pv.push_back(x);
    std::reverse(pu.begin(), pu.end());
    std::reverse(pv.begin(), pv.end());
    NodeId last = pu.front();
    for (std::size_t i = 0; i < std::min(pu.size(), pv.size()) && pu[i] == pv[i]; ++i) last = pu[i];
    return last;
}

namespace {

double loss_of(double x, double z, LossKind loss) {
    const double d = std::abs(x - z);
    return loss == LossKind::Squared ? d * d : d;
}

std::vector<double> expand(const RationalProfile& p, long long units) {
    std::vector<double> atoms;
    const long long scale = units / p.denominator;
    for (std::size_t i = 0; i < p.lengths.size(); ++i)
        for (long long c = 0; c < p.numerators[i] * scale; ++c) atoms.push_back(p.lengths[i]);
    std::sort(atoms.begin(), atoms.end());
    return atoms;
}

}  // namespace

double atom_expansion_cost(const RationalProfile& a, const RationalProfile& b, LossKind loss) {
    const long long units = std::lcm(a.denominator, b.denominator);
    const std::vector<double> x = expand(a, units), z = expand(b, units);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += loss_of(x[i], z[i], loss);
    return s / static_cast<double>(units);
}

double permutation_lp_cost(const RationalProfile& a, const RationalProfile& b, LossKind loss) {
    const long long units = std::lcm(a.denominator, b.denominator);
    std::vector<double> x = expand(a, units), z = expand(b, units);
    std::vector<std::size_t> perm(z.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += loss_of(x[i], z[perm[i]], loss);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(units);
}

double brute_force_k_center(const PointSet& points, std::size_t k) {
    const std::size_t n = points.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
        double radius = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < n; ++c)
                if (mask & (1u << c)) nearest = std::min(nearest, treealign::euclidean_distance(points.row(i), points.row(c)));
            radius = std::max(radius, nearest);
        }
        best = std::min(best, radius);
    }
    return best;
}

double gw1d_direct(std::span<const double> x, std::span<const double> y) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
            const long double dx = static_cast<long double>(x[i]) - x[j];
            const long double dy = static_cast<long double>(y[i]) - y[j];
            const long double t = dx * dx - dy * dy;
            s += t * t;
        }
    return static_cast<double>(s);
}

QuantileCoupling quantile_coupling(const FlowProfile& a, const FlowProfile& b) {
    // Walk both cumulative distribution functions; every elementary interval
    // of probability levels couples one atom of each side.
    QuantileCoupling q;
    std::size_t i = 0, j = 0;
    double ca = a.masses.empty() ? 0.0 : a.masses[0];
    double cb = b.masses.empty() ? 0.0 : b.masses[0];
    double level = 0.0;
    while (i < a.size() && j < b.size()) {
        const double next = std::min(ca, cb);
        const double width = next - level;
        if (width > 0.0) {
            q.plan.push_back({i, j, width});
            const double d = a.lengths[i] - b.lengths[j];
            q.cost += width * d * d;
        }
        level = next;
        if (ca <= next && i < a.size()) {
            ++i;
            if (i < a.size()) ca += a.masses[i];
        }
        if (cb <= next && j < b.size()) {
            ++j;
            if (j < b.size()) cb += b.masses[j];
        }
    }
    return q;
}

namespace {

struct LocalAtoms {
    FlowProfile profile;
    std::vector<NodeId> node;  // per profile atom; center is the first entry of `all`
    NodeId center = treealign::kNoParent;
    double child_mass = 0.0;
};

double subtree_mass(const Measure& mu, const Tree& t, NodeId x) {
    double s = 0.0;
    for (NodeId v : treealign::subtree_nodes(t, x))
        for (std::size_t i = 0; i < mu.size(); ++i)
            if (mu.support(i) == v) s += mu.weight(i);
    return s;
}

LocalAtoms local_atoms(const Measure& mu, const Tree& t, NodeId x) {
    const double total = subtree_mass(mu, t, x);
    double at_x = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu.support(i) == x) at_x += mu.weight(i);
    struct Atom {
        double length, mass;
        NodeId node;
    };
    std::vector<Atom> atoms{{0.0, at_x / total, x}};
    LocalAtoms out;
    out.center = x;
    for (NodeId c : t.children(x)) {
        const double m = subtree_mass(mu, t, c) / total;
        out.child_mass += m;
        atoms.push_back({t.edge_length(c), m, c});
    }
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.length < q.length; });
    for (const Atom& a : atoms) {
        if (a.mass <= 0.0) continue;
        out.profile.lengths.push_back(a.length);
        out.profile.masses.push_back(a.mass);
        out.node.push_back(a.node);
    }
    return out;
}

double mean_path_below(const Measure& mu, const Tree& t, NodeId x) {
    const double total = subtree_mass(mu, t, x);
    double s = 0.0;
    for (NodeId v : treealign::subtree_nodes(t, x))
        for (std::size_t i = 0; i < mu.size(); ++i)
            if (mu.support(i) == v) s += mu.weight(i) * treealign::tree_distance(t, x, v);
    return s / total;
}

// Contribution of the pair (x, z) carrying `mass` of the top-level coupling.
double recurse(const Measure& mu, const Tree& tx, NodeId x, const Measure& nu, const Tree& tz, NodeId z, double mass) {
    const LocalAtoms ax = local_atoms(mu, tx, x), az = local_atoms(nu, tz, z);
    const bool sx = ax.child_mass < 1e-12, sz = az.child_mass < 1e-12;
    if (sx && sz) return 0.0;
    if (sx) return mass * mean_path_below(nu, tz, z);
    if (sz) return mass * mean_path_below(mu, tx, x);
    const QuantileCoupling q = quantile_coupling(ax.profile, az.profile);
    double value = mass * std::sqrt(q.cost);
    for (const auto& e : q.plan) {
        const NodeId cx = ax.node[e.i], cz = az.node[e.j];
        if (cx == x || cz == z || mass * e.mass <= 1e-15) continue;
        value += recurse(mu, tx, cx, nu, tz, cz, mass * e.mass);
    }
    return value;
}

}  // namespace

double recursive_depth_align(const Measure& mu, const Tree& tx, const Measure& nu, const Tree& tz) {
    return recurse(mu, tx, tx.root(), nu, tz, tz.root(), 1.0);
}

PairTable contingency_pairs(std::span<const int> assignment, std::span<const int> labels) {
    auto choose2 = [](std::size_t n) { return n * (n - 1) / 2; };
    std::map<std::pair<int, int>, std::size_t> cell;
    std::map<int, std::size_t> by_cluster, by_label;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++cell[{assignment[i], labels[i]}];
        ++by_cluster[assignment[i]];
        ++by_label[labels[i]];
    }
    PairTable t;
    std::size_t same_cluster = 0, same_label = 0;
    for (const auto& [key, c] : cell) t.tp += choose2(c);
    for (const auto& [key, c] : by_cluster) same_cluster += choose2(c);
    for (const auto& [key, c] : by_label) same_label += choose2(c);
    t.fp = same_cluster - t.tp;
    t.fn = same_label - t.tp;
    t.tn = choose2(labels.size()) - t.tp - t.fp - t.fn;
    return t;
}

}  // namespace support
