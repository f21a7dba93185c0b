#include "hqst/kernels.hpp"

namespace hqst::kernels {

namespace {

Isa pick_default() {
#if defined(__x86_64__)
    if (detail::avx2_supported()) return Isa::avx2;
#endif
    return Isa::scalar;
}

Isa& current() {
    static Isa isa = pick_default();
    return isa;
}

}  // namespace

Isa active_isa() { return current(); }

void force_isa(Isa isa) {
#if defined(__x86_64__)
    if (isa == Isa::avx2 && !detail::avx2_supported()) return;
    current() = isa;
#else
    current() = Isa::scalar;
    (void)isa;
#endif
}

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
#if defined(__x86_64__)
    if (current() == Isa::avx2) return detail::dot_conj_avx2(a, b, n);
#endif
    return detail::dot_conj_scalar(a, b, n);
}

cplx dot_conj_weighted(const double* w, const cplx* a, const cplx* b,
                       std::size_t n) {
#if defined(__x86_64__)
    if (current() == Isa::avx2) return detail::dot_conj_weighted_avx2(w, a, b, n);
#endif
    return detail::dot_conj_weighted_scalar(w, a, b, n);
}

double norm_weighted(const double* w, const cplx* a, std::size_t n) {
#if defined(__x86_64__)
    if (current() == Isa::avx2) return detail::norm_weighted_avx2(w, a, n);
#endif
    return detail::norm_weighted_scalar(w, a, n);
}

}  // namespace hqst::kernels
