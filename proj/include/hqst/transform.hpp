#ifndef HQST_TRANSFORM_HPP
#define HQST_TRANSFORM_HPP

#include "hqst/wavepacket.hpp"

// Channel-transformation parameter logic: ideal values and the optimal
// timing condition.

namespace hqst {

struct IdealParams {
    double omega0_i = 0.0;  // = zeta
    double xi_i = 1.0;      // = gamma2 / gamma1
    double T_i_star = std::numeric_limits<double>::quiet_NaN();  // set by optimal_ts

    UnitaryParams unitary(double t_l) const {
        return UnitaryParams{omega0_i, xi_i, T_i_star, t_l};
    }
};

// Frequency-shift and stretch matched to the link; timing left for optimal_ts.
IdealParams ideal_params(const LinkParams& link);

struct TimingResult {
    double t_s_star = 0.0;
    double T_i_star = 0.0;
    bool mass_centering_fallback = false;  // set when no balance root exists
};

// Solves |beta1|^2(t_s) = |beta1|^2(t_s - t_l) on the trailing flank; for
// multi-peaked envelopes the root capturing the most mass wins.  When t_l
// spans the whole support, falls back to centering the captured mass.
TimingResult optimal_ts(const ComplexSignal& beta1, double t_l, double xi_i);

// Re<Phi | Phi_l> with the untransformed-segment contribution kept,
// including its oscillatory phase; Phi_l is the transformed packet at
// ideal parameters but finite duration u.t_l.
double general_timing_objective(const ComplexSignal& beta1,
                                const LinkParams& link, const UnitaryParams& u);

}  // namespace hqst

#endif
