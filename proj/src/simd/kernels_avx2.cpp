#include <cmath>

#include "treealign/simd/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define TREEALIGN_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace treealign::simd {

#ifdef TREEALIGN_HAVE_AVX2
namespace {

#define AVX2_FN __attribute__((target("avx2")))

// Four rows at a time, gathered per coordinate. Multiply and add stay
// separate instructions so the result matches the scalar kernel exactly.
AVX2_FN inline __m256d distance4(const double* base, std::size_t dim, const double* q, __m256i vindex) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
        const __m256d p = _mm256_i64gather_pd(base + k, vindex, 8);
        const __m256d d = _mm256_sub_pd(p, _mm256_set1_pd(q[k]));
        s = _mm256_add_pd(s, _mm256_mul_pd(d, d));
    }
    return _mm256_sqrt_pd(s);
}

AVX2_FN inline __m256i row_index(std::size_t dim) {
    const auto d = static_cast<long long>(dim);
    return _mm256_setr_epi64x(0, d, 2 * d, 3 * d);
}

double distance_tail(const double* p, std::size_t dim, const double* q) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = p[k] - q[k];
        s += d * d;
    }
    return std::sqrt(s);
}

AVX2_FN void distances(const double* pts, std::size_t n, std::size_t dim, const double* q, double* out) {
    const __m256i vindex = row_index(dim);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, distance4(pts + i * dim, dim, q, vindex));
    for (; i < n; ++i) out[i] = distance_tail(pts + i * dim, dim, q);
}

AVX2_FN void update_nearest(const double* pts, std::size_t n, std::size_t dim, const double* q, double* best,
                            int* label, int id) {
    const __m256i vindex = row_index(dim);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = distance4(pts + i * dim, dim, q, vindex);
        const __m256d b = _mm256_loadu_pd(best + i);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, b, _CMP_LT_OQ));
        if (mask == 0) continue;
        _mm256_storeu_pd(best + i, _mm256_min_pd(d, b));
        for (int lane = 0; lane < 4; ++lane)
            if (mask & (1 << lane)) label[i + lane] = id;
    }
    for (; i < n; ++i) {
        const double d = distance_tail(pts + i * dim, dim, q);
        if (d < best[i]) {
            best[i] = d;
            label[i] = id;
        }
    }
}

AVX2_FN void project(const double* pts, std::size_t n, std::size_t dim, const double* dir, double* out) {
    const __m256i vindex = row_index(dim);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* base = pts + i * dim;
        __m256d s = _mm256_setzero_pd();
        for (std::size_t k = 0; k < dim; ++k) {
            const __m256d p = _mm256_i64gather_pd(base + k, vindex, 8);
            s = _mm256_add_pd(s, _mm256_mul_pd(p, _mm256_set1_pd(dir[k])));
        }
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i) {
        const double* p = pts + i * dim;
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += p[k] * dir[k];
        out[i] = s;
    }
}

AVX2_FN inline double hsum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

AVX2_FN PowerSums power_sums(const double* x, std::size_t n) {
    __m256d a1 = _mm256_setzero_pd(), a2 = a1, a3 = a1, a4 = a1;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d v2 = _mm256_mul_pd(v, v);
        a1 = _mm256_add_pd(a1, v);
        a2 = _mm256_add_pd(a2, v2);
        a3 = _mm256_add_pd(a3, _mm256_mul_pd(v2, v));
        a4 = _mm256_add_pd(a4, _mm256_mul_pd(v2, v2));
    }
    PowerSums r{hsum(a1), hsum(a2), hsum(a3), hsum(a4)};
    for (; i < n; ++i) {
        const double v = x[i], v2 = v * v;
        r.s1 += v;
        r.s2 += v2;
        r.s3 += v2 * v;
        r.s4 += v2 * v2;
    }
    return r;
}

AVX2_FN CrossMoments cross_moments(const double* x, const double* y, std::size_t n) {
    __m256d c1 = _mm256_setzero_pd(), c2 = c1, c3 = c1, c4 = c1;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x + i);
        const __m256d b = _mm256_loadu_pd(y + i);
        const __m256d ab = _mm256_mul_pd(a, b);
        c1 = _mm256_add_pd(c1, ab);
        c2 = _mm256_add_pd(c2, _mm256_mul_pd(ab, b));
        c3 = _mm256_add_pd(c3, _mm256_mul_pd(ab, a));
        c4 = _mm256_add_pd(c4, _mm256_mul_pd(ab, ab));
    }
    CrossMoments r{hsum(c1), hsum(c2), hsum(c3), hsum(c4)};
    for (; i < n; ++i) {
        const double ab = x[i] * y[i];
        r.xy += ab;
        r.xy2 += ab * y[i];
        r.x2y += ab * x[i];
        r.x2y2 += ab * ab;
    }
    return r;
}

#undef AVX2_FN

}  // namespace

const KernelTable* avx2() {
    static const bool supported = __builtin_cpu_supports("avx2");
    static const KernelTable table{"avx2", distances, update_nearest, project, power_sums, cross_moments};
    return supported ? &table : nullptr;
}

#else

const KernelTable* avx2() { return nullptr; }

#endif

}  // namespace treealign::simd
