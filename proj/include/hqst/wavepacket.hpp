#ifndef HQST_WAVEPACKET_HPP
#define HQST_WAVEPACKET_HPP

#include <limits>
#include <optional>

#include "hqst/signal.hpp"

// Pulse design and wave-packet synthesis.  Natural units: gamma2 = c = 1.

namespace hqst {

struct ProducibilityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct LinkParams {
    double gamma1 = 2.0;  // node-1 cavity decay rate
    double gamma2 = 1.0;  // node-2 cavity decay rate
    double zeta = 50.0;   // laser-frequency mismatch omega_L2 - omega_L1
    double k = 2.0;       // logistic drive rate

    double r() const { return gamma1 / (2.0 * k); }
    void validate() const;
};

// Channel transformation: frequency shift omega0, stretch xi, timing T,
// transformation duration t_l (may be infinite: the whole packet is
// transformed).
struct UnitaryParams {
    double omega0 = 50.0;
    double xi = 0.5;
    double T = 0.0;
    double t_l = std::numeric_limits<double>::infinity();

    double t_s() const { return T / (1.0 + 1.0 / xi); }
    double t_i() const { return t_s() - t_l; }
    double t_f() const { return t_s() + t_l / xi; }
    bool transforms_everything() const { return std::isinf(t_l); }
    void validate() const;
};

struct Producibility {
    bool producible = false;
    double margin = 0.0;      // min over time of the constraint expression
    double max_weight = 0.0;  // largest w^2 admitting probabilistic production

    static constexpr double tolerance = 1e-9;
};

// alpha1(t) = (1 + tanh(-k t)) / 2 sampled on the grid.
ComplexSignal logistic_alpha1(const LinkParams& link, const TimeGrid& grid);

// Drive G1 generating a given real monotone amplitude alpha1 from an
// initially excited atom.  Throws ProducibilityError when the emission
// constraint is violated.
ComplexSignal pulse_from_alpha1(const ComplexSignal& alpha1, double gamma1);

// Cavity amplitude beta1 = -d(alpha1)/dt / G1 with one-sided continuation
// where both numerator and denominator vanish.
ComplexSignal beta1_from_alpha1(const ComplexSignal& alpha1,
                                const ComplexSignal& pulse);

// Cavity amplitude for the logistic alpha1: exact for r = 1/2 and r = 1,
// Lerch-transcendent form otherwise.
double beta1_closed_form_logistic(const LinkParams& link, double t);

// Small-r asymptotic of the same amplitude (reference helper).
double beta1_small_r_logistic(const LinkParams& link, double t);

// Emission constraint check for a target atomic amplitude.
Producibility check_alpha1_producible(const ComplexSignal& alpha1, double gamma1);

// Emission constraint check for a target cavity envelope (real B).
Producibility check_beta1_producible(const ComplexSignal& envelope, double gamma1);

// Slowly-varying pulse design for an arbitrary-phase target.  `psi` is the
// emitted packet sqrt(gamma1)*beta1; the returned pulse is the real drive
// magnitude and theta0 the laser-phase prescription (theta0 = -arg beta1 up
// to a constant).
struct SlowPulseDesign {
    ComplexSignal pulse;   // real G1(t)
    ComplexSignal theta0;  // real phase samples
};
SlowPulseDesign pulse_from_beta1_slowly_varying(const ComplexSignal& psi,
                                                double gamma1);

// Ideal wave packet: Phi(t) = sqrt(gamma2) e^{i omega0 (T - t)}
// beta1(xi (T - t)) on `eval`.  `u` carries the ideal parameter values.
ComplexSignal ideal_phi(const ComplexSignal& beta1, const LinkParams& link,
                        const UnitaryParams& u, const TimeGrid& eval);

// Transformed wave packet Psi(t) = sqrt(gamma1) chi(t) beta1(f(t)) with the
// untransformed field blocked while the transformed one is produced.
ComplexSignal synthesize_psi(const ComplexSignal& beta1, const LinkParams& link,
                             const UnitaryParams& u, const TimeGrid& eval);

// Default envelope grid for designing pulses at drive rate k: covers
// [-15/k, 15/k] with k*dt = 1/200.  When gamma1 is given the trailing edge
// extends far enough that the emitted tail e^{-min(gamma1, 4k) t / 2} falls
// below 1e-9 (capped at 45/k).
TimeGrid envelope_grid(double k, double gamma1 = 0.0);

// Default evaluation window for overlap/ODE work at reference parameters:
// [-15/k, max(t_f, 15/k) + 15/(xi k)] per the ideal transform window.
TimeGrid evaluation_grid(const LinkParams& link, const UnitaryParams& u_ideal,
                         int samples_per_cycle = 20);

}  // namespace hqst

#endif
