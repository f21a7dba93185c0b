#if defined(__x86_64__)

#include <immintrin.h>

#include "hqst/kernels.hpp"

// AVX2+FMA variants.  A __m256d holds two complex<double> values laid out
// [re0, im0, re1, im1].  conj(a)*b per lane pair:
//   re = a.re*b.re + a.im*b.im
//   im = a.re*b.im - a.im*b.re

namespace hqst::kernels::detail {

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

inline double hsum_even(__m256d v) {
    alignas(32) double x[4];
    _mm256_store_pd(x, v);
    return x[0] + x[2];
}

inline double hsum_odd(__m256d v) {
    alignas(32) double x[4];
    _mm256_store_pd(x, v);
    return x[1] + x[3];
}

inline __m256d widen_weights(const double* w) {
    // [w0, w1] -> [w0, w0, w1, w1]
    const __m128d lo = _mm_loaddup_pd(w);
    const __m128d hi = _mm_loaddup_pd(w + 1);
    return _mm256_insertf128_pd(_mm256_castpd128_pd256(lo), hi, 1);
}

}  // namespace

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d prod = _mm256_setzero_pd();   // a.re*b.re (even), a.im*b.im (odd)
    __m256d cross = _mm256_setzero_pd();  // a.re*b.im (even), a.im*b.re (odd)
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        prod = _mm256_fmadd_pd(va, vb, prod);
        cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), cross);
    }
    double re = hsum_even(prod) + hsum_odd(prod);
    double im = hsum_even(cross) - hsum_odd(cross);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

cplx dot_conj_weighted_avx2(const double* w, const cplx* a, const cplx* b,
                            std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d prod = _mm256_setzero_pd();
    __m256d cross = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vw = widen_weights(w + i);
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_mul_pd(vw, _mm256_loadu_pd(pb + 2 * i));
        prod = _mm256_fmadd_pd(va, vb, prod);
        cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), cross);
    }
    double re = hsum_even(prod) + hsum_odd(prod);
    double im = hsum_even(cross) - hsum_odd(cross);
    for (; i < n; ++i) {
        re += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        im += w[i] * (a[i].real() * b[i].imag() - a[i].imag() * b[i].real());
    }
    return {re, im};
}

double norm_weighted_avx2(const double* w, const cplx* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vw = widen_weights(w + i);
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(va, vw), va, acc);
    }
    double s = hsum_even(acc) + hsum_odd(acc);
    for (; i < n; ++i)
        s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return s;
}

}  // namespace hqst::kernels::detail

#endif  // __x86_64__
