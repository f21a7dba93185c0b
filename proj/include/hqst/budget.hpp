#ifndef HQST_BUDGET_HPP
#define HQST_BUDGET_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

// Standard-loss survival probabilities, cooperativity records, thermal
// occupation, and repeat-until-success error-correction accounting.

namespace hqst {

struct CooperativityRecord {
    std::string label;
    std::string emitter_type;  // "neutral-atom" | "ion"
    double C_em = 0.0;
    double C_cav = 0.0;

    // raw inputs when available
    std::optional<double> g_mhz, gamma_mhz, gammasd_mhz;    // emitter side
    std::optional<double> t_in, t_out, loss;                // cavity side (ppm or rates)
    bool cav_inferred = false;   // C_cav backtracked from a reported survival
    bool cav_overestimate = false;  // loss not reported, taken as zero
    bool in_abridged = true;     // participates in the headline averages
    bool cav_in_average = true;

    void validate() const;
};

struct SurvivalProbabilities {
    double P_em = 0.0;
    double P_cav = 0.0;
    double P_3 = 1.0;
};

// C/(1+C) per stage plus exponential line loss over x/x_tl.
SurvivalProbabilities survival_probabilities(const CooperativityRecord& rec,
                                             double x_over_xtl);

// Bare success probability degraded by both nodes' emitter and cavity
// couplings and by line loss.
double tilde_p_success(double p, const CooperativityRecord& node1,
                       const CooperativityRecord& node2, double x_over_xtl);

// Mean thermal photon number at angular frequency omega (rad/s) and
// temperature T (kelvin).  SI units at this boundary only.
double thermal_occupation(double angular_frequency, double temperature);
double thermal_occupation_wavelength(double wavelength_m, double temperature);

// Single-transmission channel amplitudes; tilde set describes the second
// transmission of a trial (defaults to the first: systematic errors).
struct EczChannel {
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{1.0, 0.0};
    std::complex<double> upsilon1{0.0, 0.0};
    std::complex<double> upsilon2{0.0, 0.0};
    std::complex<double> alpha_t{1.0, 0.0};
    std::complex<double> beta_t{1.0, 0.0};
    std::complex<double> upsilon1_t{0.0, 0.0};
    std::complex<double> upsilon2_t{0.0, 0.0};

    static EczChannel systematic(std::complex<double> alpha,
                                 std::complex<double> beta,
                                 std::complex<double> upsilon1,
                                 std::complex<double> upsilon2);
    void validate() const;
};

struct EczStepProbabilities {
    double P_jump = 0.0;
    double P_ii = 0.0;
    double P_jump_tilde = 0.0;
    double P_iv = 0.0;
    double P_s = 0.0;  // full trial succeeds
};

// Failure probabilities of the redundant-encoding trial, tracking the
// renormalized amplitudes through both transmissions.
EczStepProbabilities ecz_step_probabilities(const EczChannel& ch);

// Expected trials until success, 1 / P_s.
double ecz_expected_trials(const EczChannel& ch);

// Closed forms used for the headline curves.
double ecz_worst_case_trials(double eps);   // photon-loss dominated, |alpha| = 1
double ecz_both_errors_trials(double eps);  // amplitude damping on alpha too

struct EnCurvePoint {
    double one_minus_p = 0.0;  // bare shape error 1 - P_success
    double expected_trials = 0.0;
};

// Expected-trials curve against the bare success probability for equal
// cooperativities C0 at both stages of both nodes.
std::vector<EnCurvePoint> en_vs_psuccess_curve(double C0, double x_over_xtl,
                                               const std::vector<double>& psucc_axis);

// Trial-state fidelity when the two transmissions of a trial differ.
double ecz_nonsystematic_fidelity(double ratio_a, double ratio_b, double delta_ab);

// --- cooperativity dataset -------------------------------------------------

struct CooperativityTable {
    std::vector<CooperativityRecord> rows;

    struct Averages {
        double C_em = 0.0, C_cav = 0.0;
        double C_em_trimmed = 0.0, C_cav_trimmed = 0.0;
    };
    Averages averages() const;  // over abridged rows; trimmed drops max and min
};

CooperativityTable load_cooperativity_table(const std::string& path);

}  // namespace hqst

#endif
