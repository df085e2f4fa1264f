#include <cmath>

#include "treealign/simd/kernels.hpp"

namespace treealign::simd {
namespace {

double distance_row(const double* p, std::size_t dim, const double* q) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = p[k] - q[k];
        s += d * d;
    }
    return std::sqrt(s);
}

void distances(const double* pts, std::size_t n, std::size_t dim, const double* q, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = distance_row(pts + i * dim, dim, q);
}

void update_nearest(const double* pts, std::size_t n, std::size_t dim, const double* q, double* best, int* label,
                    int id) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = distance_row(pts + i * dim, dim, q);
        if (d < best[i]) {
            best[i] = d;
            label[i] = id;
        }
    }
}

void project(const double* pts, std::size_t n, std::size_t dim, const double* dir, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = pts + i * dim;
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += p[k] * dir[k];
        out[i] = s;
    }
}

PowerSums power_sums(const double* x, std::size_t n) {
    PowerSums r;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        const double v2 = v * v;
        r.s1 += v;
        r.s2 += v2;
        r.s3 += v2 * v;
        r.s4 += v2 * v2;
    }
    return r;
}

CrossMoments cross_moments(const double* x, const double* y, std::size_t n) {
    CrossMoments r;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x[i], b = y[i];
        const double ab = a * b;
        r.xy += ab;
        r.xy2 += ab * b;
        r.x2y += ab * a;
        r.x2y2 += ab * ab;
    }
    return r;
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", distances, update_nearest, project, power_sums, cross_moments};
    return table;
}

}  // namespace treealign::simd
