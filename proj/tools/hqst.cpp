// Command-line front end: scenario configs in, deterministic CSV out.
// All rates and times are in natural units with gamma2 = c = 1; SI units
// appear only at the thermal-occupation boundary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hqst/analysis.hpp"
#include "hqst/budget.hpp"
#include "hqst/parallel.hpp"
#include "hqst/scenario.hpp"

namespace {

using namespace hqst;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvWriter {
    std::ostringstream body;
    std::string path;  // empty: stdout

    void comment(const std::string& line) { body << "# " << line << "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body << ',';
            body << cells[i];
        }
        body << "\n";
    }
    void flush() {
        if (path.empty()) {
            std::cout << body.str();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + path);
        out << body.str();
    }
};

struct Common {
    std::string config_path;
    std::string output_path;
    int jobs = 0;
    bool jobs_given = false;
};

Config load_config(const Common& c) {
    Config cfg;
    if (!c.config_path.empty()) cfg = Config::parse_file(c.config_path);
    return cfg;
}

int resolve_jobs(const Scenario& sc, const Common& c) {
    int jobs = c.jobs_given ? c.jobs : sc.jobs;
    if (const char* env = std::getenv("HQST_JOBS")) {
        try {
            jobs = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError("HQST_JOBS is not an integer");
        }
    }
    return jobs;
}

CsvWriter make_writer(const Scenario& sc, const Config& cfg, const Common& c,
                      const std::string& subcommand) {
    CsvWriter w;
    w.path = !c.output_path.empty() ? c.output_path : sc.output_path;
    w.comment("hqst " + subcommand);
    w.comment("units: gamma2 = 1");
    w.comment("scenario: " + sc.hash_hex(cfg));
    return w;
}

ReferenceScenario build_reference(const Scenario& sc) {
    const double tl = std::isfinite(sc.t_l) ? sc.t_l : 10.0 / sc.link.gamma2;
    return make_logistic_scenario(sc.link, tl);
}

// ---------------------------------------------------------------------------

int run_wavepacket(const Scenario& sc, const Config& cfg, const Common& c) {
    const auto ref = build_reference(sc);
    CsvWriter w = make_writer(sc, cfg, c, "wavepacket");

    if (cfg.has("wavepacket.slow_design_ratios")) {
        // arbitrary-phase design check: sech target with a smooth phase ramp
        std::vector<double> ratios;
        {
            std::stringstream ss(cfg.get_str("wavepacket.slow_design_ratios", ""));
            std::string item;
            while (std::getline(ss, item, ',')) ratios.push_back(std::stod(item));
        }
        w.row({"gamma1_over_2k", "target_overlap"});
        for (double ratio : ratios) {
            const double k = 1.0, g1 = 2.0 * ratio * k;
            const LinkParams link{g1, 1.0, 0.0, k};
            const TimeGrid g = make_grid(-15.0 / k, 15.0 / k, 1.0 / (400.0 * k));
            ComplexSignal target(g), psi(g);
            for (std::size_t i = 0; i < g.n; ++i) {
                const double t = g.t(i);
                const cplx ph = std::polar(1.0, std::atan(k * t) + M_PI / 2.0);
                target.values[i] = std::sqrt(k / (2.0 * g1)) / std::cosh(k * t) * ph;
                psi.values[i] = std::sqrt(g1) * target.values[i];
            }
            const auto design = pulse_from_beta1_slowly_varying(psi, g1);
            ComplexSignal drive(g);
            for (std::size_t i = 0; i < g.n; ++i)
                drive.values[i] = design.pulse.values[i].real() *
                                  std::polar(1.0, -design.theta0.values[i].real());
            const UnitaryParams u{0.0, 1.0, 0.0, 0.0};
            const auto tr = integrate_general(drive, ComplexSignal(g), 0.0, 0.0,
                                              link, u, {cplx{1.0, 0.0}, {}, {}, {}}, g);
            const double ov = g1 * std::abs(inner_product(tr.signal_beta1(), target));
            w.row({fmt(ratio), fmt(ov)});
        }
        w.flush();
        return 0;
    }

    const UnitaryParams u_err = sc.resolve_unitary(ref);
    const UnitaryParams u_phi{ref.ideal.omega0_i, ref.ideal.xi_i,
                              ref.ideal.T_i_star,
                              std::numeric_limits<double>::infinity()};
    const UnitaryParams u_ideal{ref.ideal.omega0_i, ref.ideal.xi_i,
                                ref.ideal.T_i_star, sc.t_l};
    const TimeGrid eval = evaluation_grid(sc.link, u_ideal);
    const auto phi = ideal_phi(ref.beta1, sc.link, u_phi, eval);
    const auto psi = synthesize_psi(ref.beta1, sc.link, u_err, eval);

    w.comment("T_i_star: " + fmt(ref.ideal.T_i_star));
    w.row({"t", "alpha1", "pulse1", "beta1", "abs_phi", "re_psi", "im_psi", "abs_psi"});
    for (std::size_t i = 0; i < eval.n; ++i) {
        const double t = eval.t(i);
        const double a1 = 0.5 * (1.0 + std::tanh(-sc.link.k * t));
        w.row({fmt(t), fmt(a1), fmt(interp(ref.pulse1, t).real()),
               fmt(interp(ref.beta1, t).real()), fmt(std::abs(phi.values[i])),
               fmt(psi.values[i].real()), fmt(psi.values[i].imag()),
               fmt(std::abs(psi.values[i]))});
    }
    w.flush();
    return 0;
}

int run_psuccess(const Scenario& sc, const Config& cfg, const Common& c,
                 bool with_ode) {
    const auto ref = build_reference(sc);
    const UnitaryParams u_err = sc.resolve_unitary(ref);
    const double p = p_success_point(ref, u_err);
    CsvWriter w = make_writer(sc, cfg, c, "psuccess");
    w.row({"domega0", "dlxi", "dT", "t_l", "p_overlap", "p_ode"});
    std::string pd = "";
    if (with_ode) pd = fmt(p_success_ode(ref, u_err));
    w.row({fmt(u_err.omega0 - ref.ideal.omega0_i),
           fmt(std::log2(u_err.xi / ref.ideal.xi_i)),
           fmt(u_err.T - ref.ideal.T_i_star), fmt(u_err.t_l), fmt(p), pd});
    w.flush();
    std::printf("P_success = %.6f\n", p);
    return 0;
}

int run_sweep(const Scenario& sc, const Config& cfg, const Common& c) {
    if (!sc.axis1)
        throw ConfigError("sweep: no axis given (use --axis/--range or [sweep])");
    const auto ref = build_reference(sc);
    const int jobs = resolve_jobs(sc, c);
    const auto grid = sweep(ref, sc.axis1->spec(),
                            sc.axis2 ? std::optional<AxisSpec>(sc.axis2->spec())
                                     : std::nullopt,
                            sc.t_l, jobs, sc.ode_subsample);
    CsvWriter w = make_writer(sc, cfg, c, "sweep");
    w.comment("T_i_star: " + fmt(ref.ideal.T_i_star));
    if (grid.ode_max_discrepancy)
        w.comment("ode_max_discrepancy: " + fmt(*grid.ode_max_discrepancy));
    const auto s1 = grid.axis1.samples();
    if (grid.two_d) {
        const auto s2 = grid.axis2.samples();
        w.row({error_var_name(grid.axis1.var), error_var_name(grid.axis2.var),
               "p_success"});
        for (std::size_t i = 0; i < s1.size(); ++i)
            for (std::size_t j = 0; j < s2.size(); ++j)
                w.row({fmt(s1[i]), fmt(s2[j]), fmt(grid.at(i, j))});
    } else {
        w.row({error_var_name(grid.axis1.var), "p_success"});
        for (std::size_t i = 0; i < s1.size(); ++i)
            w.row({fmt(s1[i]), fmt(grid.values[i])});
    }
    w.flush();
    return 0;
}

int run_separability(const Scenario& sc, const Config& cfg, const Common& c) {
    CsvWriter w = make_writer(sc, cfg, c, "separability");
    const double scale = cfg.get_num("separability.region_scale", 2.0);
    const auto n = static_cast<std::size_t>(cfg.get_u64("separability.grid", 121));

    if (cfg.get_str("separability.closed_form_r0", "0") == "1") {
        // impulse-limit packet over a ladder of region scales
        w.row({"scale", "S_om_T", "S0_om_T", "S_om_xi", "S0_om_xi", "S_T_xi", "S0_T_xi"});
        const double smax = cfg.get_num("separability.max_scale", 10.0);
        for (double s = 1.0; s <= smax + 1e-9; s += 1.0) {
            auto matrix = [&](ErrorVar v1, ErrorVar v2) {
                auto bound = [&](ErrorVar v) {
                    return v == ErrorVar::delta_omega0 ? 3.0 * s
                           : v == ErrorVar::delta_lxi  ? 6.0 * s
                                                       : 7.5 * s;
                };
                std::vector<double> m(n * n);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        const double a = -bound(v1) + 2.0 * bound(v1) * i / (n - 1.0);
                        const double b = -bound(v2) + 2.0 * bound(v2) * j / (n - 1.0);
                        double x = 0, y = 0, z = 0;
                        if (v1 == ErrorVar::delta_omega0) x = a;
                        else if (v1 == ErrorVar::delta_lxi) y = a;
                        else z = a;
                        if (v2 == ErrorVar::delta_omega0) x = b;
                        else if (v2 == ErrorVar::delta_lxi) y = b;
                        else z = b;
                        m[i * n + j] = psucc_closed_form_r0(x, y, z);
                    }
                }
                return m;
            };
            const auto mxz = matrix(ErrorVar::delta_omega0, ErrorVar::delta_T);
            const auto mxy = matrix(ErrorVar::delta_omega0, ErrorVar::delta_lxi);
            const auto mzy = matrix(ErrorVar::delta_T, ErrorVar::delta_lxi);
            w.row({fmt(s), fmt(separability_index(mxz, n, n, false)),
                   fmt(separability_index(mxz, n, n, true)),
                   fmt(separability_index(mxy, n, n, false)),
                   fmt(separability_index(mxy, n, n, true)),
                   fmt(separability_index(mzy, n, n, false)),
                   fmt(separability_index(mzy, n, n, true))});
        }
        w.flush();
        return 0;
    }

    const auto ref = build_reference(sc);
    const int jobs = resolve_jobs(sc, c);
    const double inf = std::numeric_limits<double>::infinity();
    auto pair = [&](ErrorVar v1, double b1, ErrorVar v2, double b2) {
        const AxisSpec a1{v1, -b1 * scale, b1 * scale, n};
        const AxisSpec a2{v2, -b2 * scale, b2 * scale, n};
        return sweep(ref, a1, a2, inf, jobs, 0);
    };
    w.comment("region: |dT| <= " + fmt(7.5 * scale) + ", |dlxi| <= " +
              fmt(6.0 * scale) + ", |domega0| <= " + fmt(3.0 * scale));
    w.row({"pair", "grid", "S", "S_zero_mean"});
    const auto g_t_xi = pair(ErrorVar::delta_T, 7.5, ErrorVar::delta_lxi, 6.0);
    w.row({"T,xi", fmt(static_cast<double>(n)), fmt(separability_index(g_t_xi, false)),
           fmt(separability_index(g_t_xi, true))});
    const auto g_om_xi = pair(ErrorVar::delta_omega0, 3.0, ErrorVar::delta_lxi, 6.0);
    w.row({"omega0,xi", fmt(static_cast<double>(n)),
           fmt(separability_index(g_om_xi, false)),
           fmt(separability_index(g_om_xi, true))});
    const auto g_om_t = pair(ErrorVar::delta_omega0, 3.0, ErrorVar::delta_T, 7.5);
    w.row({"omega0,T", fmt(static_cast<double>(n)),
           fmt(separability_index(g_om_t, false)),
           fmt(separability_index(g_om_t, true))});
    w.flush();
    return 0;
}

int run_budget(const Scenario& sc, const Config& cfg, const Common& c) {
    CooperativityRecord n1, n2;
    n1.label = "node1";
    n1.C_em = sc.budget_C_em;
    n1.C_cav = sc.budget_C_cav;
    n2 = n1;
    n2.label = "node2";
    const auto s = survival_probabilities(n1, sc.budget_x);
    CsvWriter w = make_writer(sc, cfg, c, "budget");
    w.row({"quantity", "value"});
    w.row({"P_em", fmt(s.P_em)});
    w.row({"P_cav", fmt(s.P_cav)});
    w.row({"P_3", fmt(s.P_3)});
    w.row({"P_tot", fmt(std::pow(s.P_em * s.P_cav, 2.0))});
    w.row({"tilde_P_at_unit_p", fmt(tilde_p_success(1.0, n1, n2, sc.budget_x))});
    const double temp = cfg.get_num("budget.temperature_K", 293.0);
    std::stringstream ss(cfg.get_str("budget.wavelengths_nm", "700,2e7"));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double nm = std::stod(item);
        w.row({"n_thermal_at_" + item + "nm",
               fmt(thermal_occupation_wavelength(nm * 1e-9, temp))});
    }
    w.flush();
    return 0;
}

int run_ecz(const Scenario& sc, const Config& cfg, const Common& c) {
    CsvWriter w = make_writer(sc, cfg, c, "ecz");
    w.row({"C0", "x_over_xtl", "one_minus_p", "expected_trials"});
    std::vector<double> axis;
    const auto samples = static_cast<std::size_t>(cfg.get_u64("ecz.samples", 400));
    for (std::size_t i = 1; i <= samples; ++i)
        axis.push_back(static_cast<double>(i) / (static_cast<double>(samples) + 1.0));
    for (double C0 : sc.ecz_C0) {
        for (double x : sc.ecz_x) {
            const auto curve = en_vs_psuccess_curve(C0, x, axis);
            for (const auto& pt : curve)
                w.row({fmt(C0), fmt(x), fmt(pt.one_minus_p), fmt(pt.expected_trials)});
        }
    }
    w.flush();
    return 0;
}

int run_decay(const Scenario& sc, const Config& cfg, const Common& c) {
    CsvWriter w = make_writer(sc, cfg, c, "decay");
    w.row({"model", "C1", "r", "efficiency", "overlap"});
    std::vector<std::string> models;
    if (sc.decay_model == "both") {
        models = {"large-detuning", "finite-detuning"};
    } else {
        models = {sc.decay_model};
    }
    for (const auto& name : models) {
        for (double r : sc.decay_r) {
            const double k = 1.0;
            const LinkParams link{2.0 * k * r, 1.0, 0.0, k};
            const auto ref = make_logistic_scenario(link, 10.0);
            for (double C1 : sc.decay_C1) {
                const DecayModel model = name == "large-detuning"
                                             ? DecayModel::large_detuning(C1)
                                             : DecayModel::finite_detuning(C1);
                const auto tr =
                    integrate_with_decay(model, ref.pulse1, link, ref.beta1.grid);
                const auto [eta2, ov] = emission_metrics(tr, ref.beta1, link.gamma1);
                w.row({name, fmt(C1), fmt(r), fmt(eta2), fmt(ov)});
            }
        }
    }
    w.flush();
    return 0;
}

int run_validate(const Scenario& sc, const Config& cfg, const Common& c) {
    const auto ref = build_reference(sc);
    std::mt19937_64 rng(sc.seed);
    auto uni = [&rng](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    CsvWriter w = make_writer(sc, cfg, c, "validate");
    w.row({"domega0", "dlxi", "dT", "p_overlap", "p_ode", "abs_diff"});
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.validate_points; ++i) {
        const double x = uni(-3.0, 3.0);
        const double y = uni(-6.0, 6.0);
        const double z = uni(-7.5, 7.5);
        const UnitaryParams u = perturbed_unitary(ref, x, y, z, sc.t_l);
        const double po = p_success_point(ref, u);
        const double pd = p_success_ode(ref, u);
        worst = std::max(worst, std::abs(po - pd));
        w.row({fmt(x), fmt(y), fmt(z), fmt(po), fmt(pd), fmt(std::abs(po - pd))});
    }
    w.comment("max_discrepancy: " + fmt(worst));
    w.flush();
    std::printf("max |P_ode - P_overlap| over %zu points: %.3e\n",
                sc.validate_points, worst);
    return 0;
}

int run_table(const Scenario& sc, const Config& cfg, const Common& c,
              const std::string& data_path) {
    const auto table = load_cooperativity_table(data_path);
    CsvWriter w = make_writer(sc, cfg, c, "table");
    w.row({"label", "emitter_type", "C_em", "P_em_pct", "C_cav", "P_cav_pct",
           "P_tot_pct", "cav_inferred", "in_averages"});
    for (const auto& r : table.rows) {
        std::string pcav = "", ptot = "", ccav = "";
        if (r.C_cav > 0.0) {
            const auto s = survival_probabilities(r, 0.0);
            ccav = fmt(r.C_cav);
            pcav = fmt(100.0 * s.P_cav);
            ptot = fmt(100.0 * std::pow(s.P_em * s.P_cav, 2.0));
        }
        const double pem = 100.0 * r.C_em / (1.0 + r.C_em);
        w.row({r.label, r.emitter_type, fmt(r.C_em), fmt(pem), ccav, pcav, ptot,
               r.cav_inferred ? "1" : "0", r.in_abridged ? "1" : "0"});
    }
    const auto avg = table.averages();
    w.row({"average", "", fmt(avg.C_em), "", fmt(avg.C_cav), "", "", "", ""});
    w.row({"average_trimmed", "", fmt(avg.C_em_trimmed), "", fmt(avg.C_cav_trimmed),
           "", "", "", ""});
    w.flush();
    return 0;
}

int run_fidelity(const Scenario& sc, const Config& cfg, const Common& c) {
    CsvWriter w = make_writer(sc, cfg, c, "fidelity");
    w.row({"x", "a", "dtheta", "fidelity", "avg_fidelity_at_a"});
    std::vector<double> amps{0.5, 0.75, 0.9, 1.0};
    for (double a : amps) {
        const double dtheta = cfg.get_num("fidelity.dtheta", 0.0);
        const double avg = avg_fidelity(a, dtheta);
        for (int i = 0; i <= 100; ++i) {
            const double x = 0.01 * i;
            w.row({fmt(x), fmt(a), fmt(dtheta), fmt(fidelity({x, a, dtheta})),
                   fmt(avg)});
        }
    }
    w.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic photon-mediated state transfer toolkit"};
    app.require_subcommand(1);

    Common common;
    std::string axis1_name, range1, axis2_name, range2, data_path;
    std::string xi_s, T_s, omega0_s, tl_s;
    bool with_ode = false;
    std::size_t points_flag = 0;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "scenario config file");
        cmd->add_option("-o,--output", common.output_path, "CSV output path");
        cmd->add_option("--jobs", common.jobs, "worker threads (HQST_JOBS overrides)")
            ->each([&](const std::string&) { common.jobs_given = true; });
    };

    auto* cmd_wavepacket = app.add_subcommand("wavepacket", "packet shapes and drives");
    add_common(cmd_wavepacket);
    auto* cmd_psuccess = app.add_subcommand("psuccess", "single-point transfer probability");
    add_common(cmd_psuccess);
    cmd_psuccess->add_option("--xi", xi_s, "stretch override");
    cmd_psuccess->add_option("--T", T_s, "timing override");
    cmd_psuccess->add_option("--omega0", omega0_s, "frequency-shift override");
    cmd_psuccess->add_option("--tl", tl_s, "transformation duration (or inf)");
    cmd_psuccess->add_flag("--ode", with_ode, "also integrate the amplitude equations");
    auto* cmd_sweep = app.add_subcommand("sweep", "error-variable sweeps");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--axis", axis1_name, "error variable: omega0 | lxi | T");
    cmd_sweep->add_option("--range", range1, "lo:hi:count");
    cmd_sweep->add_option("--axis2", axis2_name, "second error variable");
    cmd_sweep->add_option("--range2", range2, "lo:hi:count");
    cmd_sweep->add_option("--tl", tl_s, "transformation duration (or inf)");
    auto* cmd_sep = app.add_subcommand("separability", "error-pair separability indices");
    add_common(cmd_sep);
    auto* cmd_budget = app.add_subcommand("budget", "loss budget and thermal occupation");
    add_common(cmd_budget);
    auto* cmd_ecz = app.add_subcommand("ecz", "repeat-until-success trial counts");
    add_common(cmd_ecz);
    auto* cmd_decay = app.add_subcommand("decay", "emission under spontaneous decay");
    add_common(cmd_decay);
    auto* cmd_validate = app.add_subcommand("validate", "cross-check overlap vs dynamics");
    add_common(cmd_validate);
    cmd_validate->add_option("--points", points_flag, "number of random points");
    cmd_validate->add_option("--seed", seed_flag, "random seed")
        ->each([&](const std::string&) { seed_given = true; });
    auto* cmd_table = app.add_subcommand("table", "cooperativity survey table");
    add_common(cmd_table);
    cmd_table->add_option("--data", data_path, "cooperativity dataset CSV");
    auto* cmd_fidelity = app.add_subcommand("fidelity", "state-fidelity curves");
    add_common(cmd_fidelity);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Config cfg = load_config(common);
        // flag overrides land in the config so the provenance hash sees them
        if (!axis1_name.empty()) cfg.set("sweep.axis1", axis1_name);
        if (!range1.empty()) cfg.set("sweep.range1", range1);
        if (!axis2_name.empty()) cfg.set("sweep.axis2", axis2_name);
        if (!range2.empty()) cfg.set("sweep.range2", range2);
        if (!xi_s.empty()) cfg.set("unitary.xi", xi_s);
        if (!T_s.empty()) cfg.set("unitary.T", T_s);
        if (!omega0_s.empty()) cfg.set("unitary.omega0", omega0_s);
        if (!tl_s.empty()) cfg.set("unitary.t_l", tl_s);
        if (points_flag) cfg.set("run.validate_points", std::to_string(points_flag));
        if (seed_given) cfg.set("run.seed", std::to_string(seed_flag));

        Scenario sc = Scenario::from_config(cfg);

        if (cmd_wavepacket->parsed()) return run_wavepacket(sc, cfg, common);
        if (cmd_psuccess->parsed()) return run_psuccess(sc, cfg, common, with_ode);
        if (cmd_sweep->parsed()) return run_sweep(sc, cfg, common);
        if (cmd_sep->parsed()) return run_separability(sc, cfg, common);
        if (cmd_budget->parsed()) return run_budget(sc, cfg, common);
        if (cmd_ecz->parsed()) return run_ecz(sc, cfg, common);
        if (cmd_decay->parsed()) return run_decay(sc, cfg, common);
        if (cmd_validate->parsed()) return run_validate(sc, cfg, common);
        if (cmd_fidelity->parsed()) return run_fidelity(sc, cfg, common);
        if (cmd_table->parsed()) {
            if (data_path.empty())
                data_path = cfg.get_str("table.data",
                                        std::string(HQST_DATA_DIR) +
                                            "/cooperativity_table.csv");
            return run_table(sc, cfg, common, data_path);
        }
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
