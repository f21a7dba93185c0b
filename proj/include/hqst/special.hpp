#ifndef HQST_SPECIAL_HPP
#define HQST_SPECIAL_HPP

namespace hqst::special {

// Lerch transcendent Phi(z, 1, a) for real z <= 0 (plus |z| < 1 on the
// positive side) and a > 0.  Series on |z| < 1, integral representation
//   Phi(z, 1, a) = int_0^1 u^{a-1} / (1 - z u) du
// elsewhere on the cut plane.
double lerch_phi_s1(double z, double a);

}  // namespace hqst::special

#endif
