#include "hqst/kernels.hpp"

namespace hqst::kernels::detail {

// Reference kernels.  Accumulation in two independent partial sums mirrors
// the lane structure of the vector variants closely enough that the two
// paths agree to roundoff on well-scaled inputs.

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        re0 += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im0 += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
        re1 += a[i + 1].real() * b[i + 1].real() + a[i + 1].imag() * b[i + 1].imag();
        im1 += a[i + 1].real() * b[i + 1].imag() - a[i + 1].imag() * b[i + 1].real();
    }
    if (i < n) {
        re0 += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im0 += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re0 + re1, im0 + im1};
}

cplx dot_conj_weighted_scalar(const double* w, const cplx* a, const cplx* b,
                              std::size_t n) {
    double re0 = 0.0, im0 = 0.0, re1 = 0.0, im1 = 0.0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        re0 += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        im0 += w[i] * (a[i].real() * b[i].imag() - a[i].imag() * b[i].real());
        re1 += w[i + 1] * (a[i + 1].real() * b[i + 1].real() + a[i + 1].imag() * b[i + 1].imag());
        im1 += w[i + 1] * (a[i + 1].real() * b[i + 1].imag() - a[i + 1].imag() * b[i + 1].real());
    }
    if (i < n) {
        re0 += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        im0 += w[i] * (a[i].real() * b[i].imag() - a[i].imag() * b[i].real());
    }
    return {re0 + re1, im0 + im1};
}

double norm_weighted_scalar(const double* w, const cplx* a, std::size_t n) {
    double s0 = 0.0, s1 = 0.0;
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        s0 += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
        s1 += w[i + 1] * (a[i + 1].real() * a[i + 1].real() + a[i + 1].imag() * a[i + 1].imag());
    }
    if (i < n) s0 += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return s0 + s1;
}

}  // namespace hqst::kernels::detail
