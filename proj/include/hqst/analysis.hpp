#ifndef HQST_ANALYSIS_HPP
#define HQST_ANALYSIS_HPP

#include <cstdint>
#include <optional>

#include "hqst/dynamics.hpp"
#include "hqst/transform.hpp"

// Transfer-success evaluation, error sweeps, separability indices, and
// fidelity calculators.

namespace hqst {

// |<phi|psi>|^2 on a shared grid, clamped to [0, 1].
double p_success_overlap(const ComplexSignal& phi, const ComplexSignal& psi);

// A link with its designed drive, cavity amplitude, and matched ideal
// transformation parameters; the base configuration every sweep perturbs.
struct ReferenceScenario {
    LinkParams link;
    IdealParams ideal;      // T_i_star solved for timing_t_l
    double timing_t_l = 0.0;
    ComplexSignal pulse1;   // envelope-grid drive
    ComplexSignal beta1;    // envelope-grid cavity amplitude
};

// Logistic drive design for the link; T* solved at transformation
// duration t_l.
ReferenceScenario make_logistic_scenario(const LinkParams& link, double t_l);

// <Phi|Psi> evaluated segment by segment: passthrough stretches carry the
// full carrier and are sampled to resolve it, the transformed stretch
// carries only the detuning phase and is sampled to resolve the compressed
// envelope.
cplx overlap_segmented(const ReferenceScenario& sc, const UnitaryParams& u_err,
                       int samples_per_cycle = 20);

// |overlap_segmented|^2 clamped to [0, 1].
double p_success_point(const ReferenceScenario& sc, const UnitaryParams& u_err,
                       int samples_per_cycle = 20);

// Same probability through the amplitude equations.
double p_success_ode(const ReferenceScenario& sc, const UnitaryParams& u_err,
                     const ode::Options& opt = {});

// Dimensionless error variables
enum class ErrorVar : std::uint8_t { delta_omega0, delta_lxi, delta_T };

struct AxisSpec {
    ErrorVar var = ErrorVar::delta_omega0;
    double lo = 0.0, hi = 0.0;
    std::size_t count = 2;

    std::vector<double> samples() const;
};

struct SweepGrid {
    AxisSpec axis1, axis2;
    bool two_d = false;
    std::vector<double> values;  // row-major [axis1.count x axis2.count]
    std::optional<double> ode_max_discrepancy;

    double at(std::size_t i, std::size_t j) const {
        return values[i * axis2.count + j];
    }
};

// Evaluates P_success over one or two error-variable axes at transformation
// duration t_l (infinite: whole packet transformed).  `ode_subsample` > 0
// cross-checks that many points against the amplitude equations.
SweepGrid sweep(const ReferenceScenario& sc, const AxisSpec& axis1,
                const std::optional<AxisSpec>& axis2, double t_l, int jobs = 0,
                std::size_t ode_subsample = 0);

UnitaryParams perturbed_unitary(const ReferenceScenario& sc, double x, double y,
                                double z, double t_l);

// Linear-interpolated full width at half maximum of a single-peaked curve.
double fwhm(const std::vector<double>& axis, const std::vector<double>& curve);

// sigma_max^2 / sum_i sigma_i^2 of a dense matrix (optionally after
// removing the grand mean).
double separability_index(const std::vector<double>& matrix, std::size_t rows,
                          std::size_t cols, bool zero_mean);
double separability_index(const SweepGrid& grid, bool zero_mean);

struct BaselineStats {
    double mean = 0.0;
    double stddev = 0.0;
};

// Mean separability of i.i.d. uniform [0,1) n-by-n matrices.
BaselineStats random_matrix_baseline(std::size_t n, std::size_t trials,
                                     std::uint64_t seed, bool zero_mean = false);

// Closed-form success probability for the impulse-limit (one-sided
// exponential) packet in the error variables x, y, z.
double psucc_closed_form_r0(double x, double y, double z);

struct NoUnitaryResult {
    double value = 0.0;
    double bound = 0.0;
};

// Transfer probability for the exponential packet when the channel applies
// no transformation, and its envelope bound.
NoUnitaryResult psucc_no_unitary_exponential(double gamma1, double gamma2,
                                             double omega0_i, double T_i);

// Overlap of an exponential packet with its delayed mirror image.
double exp_packet_self_overlap(double gamma, double T_d);

struct FidelityInputs {
    double x = 1.0;       // excited-state population |c_e|^2
    double a = 1.0;       // |alpha2(t_e)|
    double dtheta = 0.0;  // residual phase error
};

// Qubit state fidelity after transfer.
double fidelity(const FidelityInputs& in);

// Fidelity averaged over the Bloch polar angle of the input state.
double avg_fidelity(double a, double dtheta);

// Remote-entanglement fidelity from the photon mode overlap.
double heralded_fidelity(cplx overlap);

}  // namespace hqst

#endif
