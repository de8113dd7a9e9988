// AVX2+FMA variants of the dense kernels. This translation unit is compiled
// with -mavx2 -mfma on x86-64 only; entry is gated at runtime by
// __builtin_cpu_supports, so the rest of the binary stays baseline.

#include "bugnet/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace bugnet::kernels {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}

double max_value_avx2(const double* a, std::size_t n) {
    std::size_t i = 0;
    double m = a[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(a);
        for (i = 4; i + 4 <= n; i += 4) {
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(a + i));
        }
        m = hmax(acc);
    }
    for (; i < n; ++i) {
        if (a[i] > m) m = a[i];
    }
    return m;
}

void divide_inplace_avx2(double* a, double divisor, std::size_t n) {
    const __m256d d = _mm256_set1_pd(divisor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(a + i, _mm256_div_pd(_mm256_loadu_pd(a + i), d));
    }
    for (; i < n; ++i) a[i] /= divisor;
}

void sqdist_accumulate_avx2(double* acc, const double* xs, double center, std::size_t n) {
    const __m256d c = _mm256_set1_pd(center);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xs + i), c);
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(d, d, _mm256_loadu_pd(acc + i)));
    }
    for (; i < n; ++i) {
        const double d = xs[i] - center;
        acc[i] += d * d;
    }
}

double max_abs_residual_avx2(const double* y, const double* v, double lambda, std::size_t n) {
    const __m256d l = _mm256_set1_pd(lambda);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r =
            _mm256_fnmadd_pd(l, _mm256_loadu_pd(v + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, r));
    }
    double m = hmax(acc);
    for (; i < n; ++i) {
        const double r = std::fabs(y[i] - lambda * v[i]);
        if (r > m) m = r;
    }
    return m;
}

const Ops kAvx2Ops = {
    "avx2",
    dot_avx2,
    sum_avx2,
    max_value_avx2,
    divide_inplace_avx2,
    sqdist_accumulate_avx2,
    max_abs_residual_avx2,
};

}  // namespace

const Ops* avx2_ops() {
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &kAvx2Ops : nullptr;
}

}  // namespace bugnet::kernels

#else

namespace bugnet::kernels {

const Ops* avx2_ops() { return nullptr; }

}  // namespace bugnet::kernels

#endif
