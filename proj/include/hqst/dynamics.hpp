#ifndef HQST_DYNAMICS_HPP
#define HQST_DYNAMICS_HPP

#include <array>
#include <utility>

#include "hqst/ode.hpp"
#include "hqst/wavepacket.hpp"

// Direct integration of the coupled excitation-amplitude equations.

namespace hqst {

struct Trajectory {
    TimeGrid grid;
    std::vector<cplx> alpha1, beta1, alpha2, beta2;
    // |d|alpha2|^2/dt| < 1e-8 over the final 5% of the window
    bool steady = false;

    ComplexSignal signal_alpha1() const { return {grid, alpha1}; }
    ComplexSignal signal_beta1() const { return {grid, beta1}; }
    ComplexSignal signal_alpha2() const { return {grid, alpha2}; }
    ComplexSignal signal_beta2() const { return {grid, beta2}; }
};

struct DecayModel {
    enum class Kind { none, large_detuning, finite_detuning };
    Kind kind = Kind::none;
    double C1 = 0.0;       // emitter cooperativity
    double Gamma_r = 0.0;  // decay rate over twice the detuning

    // large-detuning limit (Gamma_r -> 0)
    static DecayModel large_detuning(double C1);
    // finite detuning at the default choice Delta = 5 max(g, 2 gamma1),
    // i.e. Gamma_r = 1 / (5 max(sqrt(C1), 4)) for Gamma_sd = gamma1
    static DecayModel finite_detuning(double C1);
    void validate() const;
};

// Time-reversed, stretched second drive G2(t) = xi_i G1(xi_i (T_i - t)).
ComplexSignal g2_time_reversed(const ComplexSignal& pulse1, double xi_i,
                               double T_i, const TimeGrid& eval);

using Amplitudes = std::array<cplx, 4>;  // alpha1, beta1, alpha2, beta2

// Lossless two-node model driven by real pulses; the incident packet is
// rebuilt from the node-1 solution through the transformation window, with
// the carrier phase evaluated analytically inside the solver.
Trajectory integrate_ideal(const ComplexSignal& pulse1,
                           const ComplexSignal& pulse2, const LinkParams& link,
                           const UnitaryParams& u, const Amplitudes& init,
                           const TimeGrid& eval, const ode::Options& opt = {});

// Max deviation of |alpha2(t)|, |beta2(t)| from the reflected node-1
// amplitudes at ideal parameters.
double verify_time_reversal(const Trajectory& traj, const LinkParams& link,
                            const UnitaryParams& u_ideal);

// General model: complex drives supplied directly, cavity shifts d1, d2.
Trajectory integrate_general(const ComplexSignal& drive1,
                             const ComplexSignal& drive2, double d1, double d2,
                             const LinkParams& link, const UnitaryParams& u,
                             const Amplitudes& init, const TimeGrid& eval,
                             const ode::Options& opt = {});

// Node-1 subsystem with spontaneous decay during the Raman process.
Trajectory integrate_with_decay(const DecayModel& model,
                                const ComplexSignal& pulse1,
                                const LinkParams& link, const TimeGrid& eval,
                                const ode::Options& opt = {});

// (emission efficiency, renormalized shape overlap) against a target
// cavity amplitude.
std::pair<double, double> emission_metrics(const Trajectory& traj,
                                           const ComplexSignal& target_beta1,
                                           double gamma1);

}  // namespace hqst

#endif
