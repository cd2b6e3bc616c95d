// AVX2+FMA variants of the dense-layer kernels. This translation unit is
// compiled with -mavx2 -mfma on x86-64; everything is guarded so other
// targets build the nullptr stub at the bottom.

#include "mg/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace mg::kern {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        __m256d y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void dense_forward_avx2(const double* w, const double* b, const double* x,
                        double* y, std::size_t out, std::size_t in) {
    for (std::size_t o = 0; o < out; ++o)
        y[o] = dot_avx2(w + o * in, x, in) + b[o];
}

void dense_backward_data_avx2(const double* w, const double* dy, double* dx,
                              std::size_t out, std::size_t in) {
    std::size_t i = 0;
    for (; i + 4 <= in; i += 4) _mm256_storeu_pd(dx + i, _mm256_setzero_pd());
    for (; i < in; ++i) dx[i] = 0.0;
    for (std::size_t o = 0; o < out; ++o) {
        if (dy[o] == 0.0) continue;
        axpy_avx2(dy[o], w + o * in, dx, in);
    }
}

void dense_grad_acc_avx2(double* gw, double* gb, const double* dy,
                         const double* x, std::size_t out, std::size_t in) {
    for (std::size_t o = 0; o < out; ++o) {
        if (dy[o] == 0.0) continue;
        axpy_avx2(dy[o], x, gw + o * in, in);
        gb[o] += dy[o];
    }
}

void relu_forward_avx2(const double* z, double* h, std::size_t n) {
    __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(h + i, _mm256_max_pd(_mm256_loadu_pd(z + i), zero));
    for (; i < n; ++i) h[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_backward_avx2(const double* z, const double* dh, double* dz,
                        std::size_t n) {
    __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(z + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(dz + i, _mm256_and_pd(_mm256_loadu_pd(dh + i), mask));
    }
    for (; i < n; ++i) dz[i] = z[i] > 0.0 ? dh[i] : 0.0;
}

constexpr Kernels kAvx2 = {
    dot_avx2,
    axpy_avx2,
    dense_forward_avx2,
    dense_backward_data_avx2,
    dense_grad_acc_avx2,
    relu_forward_avx2,
    relu_backward_avx2,
    "avx2",
};

bool cpu_has_avx2_fma() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

} // namespace

const Kernels* avx2_impl() {
    static const Kernels* k = cpu_has_avx2_fma() ? &kAvx2 : nullptr;
    return k;
}

} // namespace mg::kern

#else // !(__AVX2__ && __FMA__)

namespace mg::kern {
const Kernels* avx2_impl() { return nullptr; }
} // namespace mg::kern

#endif
