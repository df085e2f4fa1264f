#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; active() picks one at first use from CPUID and
// the TREEALIGN_SIMD environment variable ("scalar" or "avx2").
//
// distances() and project() reduce over dimensions in the same sequential
// order in every variant, so they agree bit-for-bit. The moment kernels
// reduce over points in lanes and agree only to rounding.

#include <cstddef>

namespace treealign::simd {

struct PowerSums {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
};

// Sums of x*y, x*y^2, x^2*y, x^2*y^2.
struct CrossMoments {
    double xy = 0, xy2 = 0, x2y = 0, x2y2 = 0;
};

struct KernelTable {
    const char* name;
    // out[i] = || pts[i] - q ||_2 for n row-major points of dimension dim.
    void (*distances)(const double* pts, std::size_t n, std::size_t dim, const double* q, double* out);
    // out[i] = min(out[i], || pts[i] - q ||_2); label[i] = id where strictly smaller.
    void (*update_nearest)(const double* pts, std::size_t n, std::size_t dim, const double* q, double* best,
                           int* label, int id);
    // out[i] = <pts[i], dir>.
    void (*project)(const double* pts, std::size_t n, std::size_t dim, const double* dir, double* out);
    PowerSums (*power_sums)(const double* x, std::size_t n);
    CrossMoments (*cross_moments)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2();
const KernelTable& active();

}  // namespace treealign::simd
