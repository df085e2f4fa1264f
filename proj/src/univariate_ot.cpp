#include "treealign/univariate_ot.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "treealign/detail/merge.hpp"
#include "treealign/error.hpp"
#include "treealign/numeric.hpp"

namespace treealign {
namespace {

constexpr double kResidualFloor = 1e-15;
constexpr double kMassTolerance = 1e-9;

inline double loss_value(double x, double z, LossKind loss) {
    const double d = x - z;
    return loss == LossKind::Squared ? d * d : std::abs(d);
}

void check_sorted(std::span<const double> x, const char* side) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] < x[i - 1]) throw InputError(std::string("univariate OT: ") + side + " supports are not sorted");
}

void check_balance(std::span<const double> a, std::span<const double> b) {
    double ta = 0.0, tb = 0.0;
    for (double v : a) ta += v;
    for (double v : b) tb += v;
    if (std::abs(ta - tb) > kMassTolerance) throw InputError("univariate OT: total masses differ");
}

// Two-pointer sweep over sorted atoms; `emit(i, j, mass)` sees every
// transported chunk in staircase order.
template <class Emit>
double sweep(std::span<const double> x, std::span<const double> a, std::span<const double> z,
             std::span<const double> b, LossKind loss, Emit&& emit) {
    if (x.size() != a.size() || z.size() != b.size()) throw InputError("univariate OT: size mismatch");
    if (x.empty() || z.empty()) throw InputError("univariate OT: empty measure");
    check_sorted(x, "source");
    check_sorted(z, "target");
    check_balance(a, b);

    CompensatedSum cost;
    std::size_t i = 0, j = 0;
    double ai = a[0], bj = b[0];
    const std::size_t n = x.size(), m = z.size();
    while (i < n && j < m) {
        if (ai <= bj) {
            emit(i, j, ai);
            cost.add(ai * loss_value(x[i], z[j], loss));
            bj -= ai;
            if (bj < kResidualFloor) bj = 0.0;
            if (++i < n) ai = a[i];
            if (bj == 0.0 && ++j < m) bj = b[j];
        } else {
            emit(i, j, bj);
            cost.add(bj * loss_value(x[i], z[j], loss));
            ai -= bj;
            if (ai < kResidualFloor) ai = 0.0;
            if (++j < m) bj = b[j];
            if (ai == 0.0 && ++i < n) ai = a[i];
        }
    }
    return cost.value();
}

}  // namespace

std::vector<double> TransportPlan::row_sums() const {
    std::vector<double> s(rows, 0.0);
    for (const auto& e : entries) s[e.i] += e.mass;
    return s;
}

std::vector<double> TransportPlan::col_sums() const {
    std::vector<double> s(cols, 0.0);
    for (const auto& e : entries) s[e.j] += e.mass;
    return s;
}

OtResult univariate_ot(const FlowProfile& mu, const FlowProfile& nu, LossKind loss) {
    OtResult r;
    r.plan.rows = mu.size();
    r.plan.cols = nu.size();
    r.plan.entries.reserve(mu.size() + nu.size());
    r.cost = sweep(mu.lengths, mu.masses, nu.lengths, nu.masses, loss, [&](std::size_t i, std::size_t j, double m) {
        if (m > 0.0) r.plan.entries.push_back({i, j, m});
    });
    return r;
}

double univariate_ot_cost(std::span<const double> x, std::span<const double> a, std::span<const double> z,
                          std::span<const double> b, LossKind loss) {
    return sweep(x, a, z, b, loss, [](std::size_t, std::size_t, double) {});
}

double univariate_ot_cost(const FlowProfile& mu, const FlowProfile& nu, LossKind loss) {
    return univariate_ot_cost(mu.lengths, mu.masses, nu.lengths, nu.masses, loss);
}

double wasserstein2(const FlowProfile& mu, const FlowProfile& nu) {
    return std::sqrt(univariate_ot_cost(mu, nu, LossKind::Squared));
}

std::vector<double> monotone_merge(std::span<const std::vector<double>> sorted_runs) {
    for (const auto& run : sorted_runs) check_sorted(run, "merge run");
    return detail::merge_runs(sorted_runs, [](double v) { return v; });
}

void write_plan(std::ostream& out, const TransportPlan& plan) {
    const auto old = out.precision(17);
    for (const auto& e : plan.entries) out << e.i << ' ' << e.j << ' ' << e.mass << '\n';
    out.precision(old);
}

}  // namespace treealign
