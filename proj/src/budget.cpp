#include "hqst/budget.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hqst {

namespace {

constexpr double hbar = 1.054571817e-34;       // J s
constexpr double k_boltzmann = 1.380649e-23;   // J / K
constexpr double c_light = 299792458.0;        // m / s

double surv(double C) { return C / (1.0 + C); }

}  // namespace

void CooperativityRecord::validate() const {
    if (!(C_em > 0.0) || !(C_cav > 0.0))
        throw std::invalid_argument("CooperativityRecord: cooperativities must be positive");
}

SurvivalProbabilities survival_probabilities(const CooperativityRecord& rec,
                                             double x_over_xtl) {
    rec.validate();
    if (x_over_xtl < 0.0)
        throw std::invalid_argument("survival_probabilities: negative line length");
    return {surv(rec.C_em), surv(rec.C_cav), std::exp(-x_over_xtl)};
}

double tilde_p_success(double p, const CooperativityRecord& node1,
                       const CooperativityRecord& node2, double x_over_xtl) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("tilde_p_success: p outside [0, 1]");
    const auto s1 = survival_probabilities(node1, x_over_xtl);
    const auto s2 = survival_probabilities(node2, 0.0);
    return p * s1.P_em * s2.P_em * s1.P_cav * s2.P_cav * s1.P_3;
}

double thermal_occupation(double angular_frequency, double temperature) {
    if (!(angular_frequency > 0.0) || !(temperature > 0.0))
        throw std::invalid_argument("thermal_occupation: need positive inputs");
    return 1.0 / std::expm1(hbar * angular_frequency / (k_boltzmann * temperature));
}

double thermal_occupation_wavelength(double wavelength_m, double temperature) {
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("thermal_occupation: need positive wavelength");
    return thermal_occupation(2.0 * M_PI * c_light / wavelength_m, temperature);
}

EczChannel EczChannel::systematic(std::complex<double> a, std::complex<double> b,
                                  std::complex<double> u1, std::complex<double> u2) {
    EczChannel ch;
    ch.alpha = ch.alpha_t = a;
    ch.beta = ch.beta_t = b;
    ch.upsilon1 = ch.upsilon1_t = u1;
    ch.upsilon2 = ch.upsilon2_t = u2;
    return ch;
}

void EczChannel::validate() const {
    const double n1 = std::norm(beta) + std::norm(upsilon1) + std::norm(upsilon2);
    const double n2 = std::norm(beta_t) + std::norm(upsilon1_t) + std::norm(upsilon2_t);
    if (std::abs(n1 - 1.0) > 1e-9 || std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument(
            "EczChannel: |beta|^2 + |Y1|^2 + |Y2|^2 must equal 1");
    if (std::abs(alpha) > 1.0 + 1e-12 || std::abs(alpha_t) > 1.0 + 1e-12)
        throw std::invalid_argument("EczChannel: |alpha| must not exceed 1");
}

EczStepProbabilities ecz_step_probabilities(const EczChannel& ch) {
    ch.validate();
    const double a2 = std::norm(ch.alpha);
    const double b2 = std::norm(ch.beta);
    const double y1 = std::norm(ch.upsilon1);
    const double y2 = std::norm(ch.upsilon2);
    const double a2t = std::norm(ch.alpha_t);
    const double y1t = std::norm(ch.upsilon1_t);
    const double y2t = std::norm(ch.upsilon2_t);

    EczStepProbabilities p;
    // first transmission: excitation loss or ground-state damping
    p.P_jump = 0.5 * (1.0 - a2 + y1);
    // residual-excitation detection; amplitudes renormalized by N_ii
    const double nii2 = 0.5 * (1.0 + a2);
    p.P_ii = 0.5 * (y2 / nii2);
    // post-measurement renormalization (double primes)
    const double scale2 = 2.0 / (1.0 + a2 - y2);  // |v''|^2 = scale2 |v|^2
    const double a2pp = scale2 * a2;
    const double b2pp = scale2 * b2;
    const double y1pp = scale2 * y1;
    // second transmission
    p.P_jump_tilde = 0.5 * ((1.0 - a2t) * (b2pp + y1pp) + y1t * a2pp);
    const double niv2 = (a2 + a2t * (1.0 - y2)) / (1.0 + a2 - y2);
    p.P_iv = 0.5 * (a2pp * (y1t + y2t) + a2t * y1pp) / niv2;
    p.P_s = (1.0 - p.P_jump) * (1.0 - p.P_ii) * (1.0 - p.P_jump_tilde) *
            (1.0 - p.P_iv);
    return p;
}

double ecz_expected_trials(const EczChannel& ch) {
    const auto p = ecz_step_probabilities(ch);
    if (!(p.P_s > 0.0))
        throw std::domain_error("ecz_expected_trials: trial never succeeds");
    return 1.0 / p.P_s;
}

double ecz_worst_case_trials(double eps) {
    if (eps < 0.0 || eps >= 1.0)
        throw std::invalid_argument("ecz_worst_case_trials: eps outside [0, 1)");
    return 4.0 / ((1.0 - eps) * (2.0 - eps) * (2.0 - eps));
}

double ecz_both_errors_trials(double eps) {
    if (eps < 0.0 || eps >= 1.0)
        throw std::invalid_argument("ecz_both_errors_trials: eps outside [0, 1)");
    const double q = 1.0 - eps;
    return 1.0 / (q * q * q);
}

std::vector<EnCurvePoint> en_vs_psuccess_curve(double C0, double x_over_xtl,
                                               const std::vector<double>& psucc_axis) {
    if (!(C0 > 0.0))
        throw std::invalid_argument("en_vs_psuccess_curve: C0 must be positive");
    CooperativityRecord node;
    node.label = "symmetric";
    node.C_em = node.C_cav = C0;
    std::vector<EnCurvePoint> out;
    out.reserve(psucc_axis.size());
    for (double p : psucc_axis) {
        const double pt = tilde_p_success(p, node, node, x_over_xtl);
        const double eps = 1.0 - pt;
        EnCurvePoint pt_out;
        pt_out.one_minus_p = 1.0 - p;
        pt_out.expected_trials = ecz_worst_case_trials(std::min(eps, 1.0 - 1e-15));
        out.push_back(pt_out);
    }
    return out;
}

double ecz_nonsystematic_fidelity(double ratio_a, double ratio_b, double delta_ab) {
    if (!(ratio_a > 0.0) || !(ratio_b > 0.0))
        throw std::invalid_argument("ecz_nonsystematic_fidelity: ratios must be positive");
    return 0.5 + ratio_a * ratio_b * std::cos(delta_ab) /
                     (ratio_a * ratio_a + ratio_b * ratio_b);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim
        const auto b = field.find_first_not_of(" \t");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> opt_num(const std::string& s) {
    if (s.empty() || s == "-") return std::nullopt;
    return std::stod(s);
}

}  // namespace

CooperativityTable load_cooperativity_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cooperativity table: " + path);
    CooperativityTable table;
    std::string line;
    bool header = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (header) {  // column names
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() < 13)
            throw std::runtime_error("cooperativity table line " +
                                     std::to_string(lineno) + ": expected 13 columns");
        CooperativityRecord r;
        r.label = f[0];
        r.emitter_type = f[1];
        r.g_mhz = opt_num(f[2]);
        r.gamma_mhz = opt_num(f[3]);
        r.gammasd_mhz = opt_num(f[4]);
        const std::string cav_kind = f[5];
        r.t_in = opt_num(f[6]);
        r.t_out = opt_num(f[7]);
        r.loss = opt_num(f[8]);

        if (r.g_mhz && r.gamma_mhz && r.gammasd_mhz) {
            r.C_em = 4.0 * (*r.g_mhz) * (*r.g_mhz) / ((*r.gamma_mhz) * (*r.gammasd_mhz));
        } else {
            r.C_em = std::stod(f[9]);  // direct value column
        }
        if (cav_kind == "ppm" || cav_kind == "rate") {
            // same functional form: desired coupling over undesired coupling
            r.C_cav = *r.t_in / (r.t_out.value_or(0.0) + r.loss.value_or(0.0));
            r.cav_overestimate = cav_kind == "ppm" && !r.loss;
        } else if (cav_kind == "inferred") {
            const double p = *r.t_in / 100.0;  // reported survival in percent
            r.C_cav = p / (1.0 - p);
            r.cav_inferred = true;
        } else if (cav_kind == "none") {
            r.C_cav = 0.0;
        } else {
            throw std::runtime_error("cooperativity table line " +
                                     std::to_string(lineno) +
                                     ": unknown cavity column kind '" + cav_kind + "'");
        }
        r.in_abridged = f[11] == "1";
        r.cav_in_average = f[12] == "1";
        table.rows.push_back(std::move(r));
    }
    if (table.rows.empty())
        throw std::runtime_error("cooperativity table: no rows in " + path);
    return table;
}

CooperativityTable::Averages CooperativityTable::averages() const {
    std::vector<double> em, cav;
    for (const auto& r : rows) {
        if (!r.in_abridged) continue;
        em.push_back(r.C_em);
        if (r.cav_in_average && r.C_cav > 0.0) cav.push_back(r.C_cav);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    auto trimmed = [&](std::vector<double> v) {
        if (v.size() < 3) return mean(v);
        std::sort(v.begin(), v.end());
        return mean({v.begin() + 1, v.end() - 1});
    };
    Averages a;
    a.C_em = mean(em);
    a.C_cav = mean(cav);
    a.C_em_trimmed = trimmed(em);
    a.C_cav_trimmed = trimmed(cav);
    return a;
}

}  // namespace hqst
