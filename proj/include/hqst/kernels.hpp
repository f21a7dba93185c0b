#ifndef HQST_KERNELS_HPP
#define HQST_KERNELS_HPP

#include <complex>
#include <cstddef>

// Data-parallel reduction kernels behind the signal algebra.  Scalar
// reference implementations are always available; an AVX2 variant is
// selected at runtime when the CPU supports it.  Both variants are
// equivalence-tested against each other.

namespace hqst::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// Instruction set currently in use.
Isa active_isa();

// Override the dispatch (tests use this to compare variants).
// Requesting avx2 on a CPU without it is ignored.
void force_isa(Isa isa);

// sum_i conj(a[i]) * b[i]
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n);

// sum_i w[i] * conj(a[i]) * b[i], w real
cplx dot_conj_weighted(const double* w, const cplx* a, const cplx* b,
                       std::size_t n);

// sum_i w[i] * |a[i]|^2, w real
double norm_weighted(const double* w, const cplx* a, std::size_t n);

namespace detail {
cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n);
cplx dot_conj_weighted_scalar(const double* w, const cplx* a, const cplx* b,
                              std::size_t n);
double norm_weighted_scalar(const double* w, const cplx* a, std::size_t n);
#if defined(__x86_64__)
bool avx2_supported();
cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n);
cplx dot_conj_weighted_avx2(const double* w, const cplx* a, const cplx* b,
                            std::size_t n);
double norm_weighted_avx2(const double* w, const cplx* a, std::size_t n);
#endif
}  // namespace detail

}  // namespace hqst::kernels

#endif
