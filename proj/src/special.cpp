#include "hqst/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hqst::special {

namespace {

double series(double z, double a) {
    double sum = 0.0, comp = 0.0;
    double zp = 1.0;
    for (int n = 0; n < 200000; ++n) {
        const double term = zp / (static_cast<double>(n) + a);
        const double t = sum + term;  // Kahan
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300)) return sum + comp;
        zp *= z;
    }
    return sum + comp;
}

double adaptive_simpson(double (*f)(double, double, double), double z, double a,
                        double lo, double hi, double fl, double fm, double fh,
                        double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm, z, a), frm = f(rm, z, a);
    const double left = (mid - lo) / 6.0 * (fl + 4.0 * flm + fm);
    const double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fh);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, z, a, lo, mid, fl, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, z, a, mid, hi, fm, frm, fh, right, 0.5 * tol, depth - 1);
}

double integrand(double u, double z, double a) {
    return std::pow(u, a - 1.0) / (1.0 - z * u);
}

double integral_rep(double z, double a) {
    // z < 0; split at the knee u ~ 1/|z| where the denominator turns over
    const double knee = std::min(1.0, 1.0 / std::abs(z));
    double acc = 0.0;
    const double edges[3] = {0.0, knee, 1.0};
    for (int s = 0; s < 2; ++s) {
        const double lo = edges[s], hi = edges[s + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        const double fl = integrand(lo, z, a), fm = integrand(mid, z, a),
                     fh = integrand(hi, z, a);
        const double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
        acc += adaptive_simpson(integrand, z, a, lo, hi, fl, fm, fh, whole,
                                1e-14 * (std::abs(whole) + 1e-30), 48);
    }
    return acc;
}

}  // namespace

double lerch_phi_s1(double z, double a) {
    if (!(a > 0.0)) throw std::domain_error("lerch_phi_s1: need a > 0");
    if (z >= 1.0) throw std::domain_error("lerch_phi_s1: z on the cut [1, inf)");
    if (std::abs(z) <= 0.98) return series(z, a);
    if (z > 0.0) throw std::domain_error("lerch_phi_s1: z too close to the cut");
    return integral_rep(z, a);
}

}  // namespace hqst::special
