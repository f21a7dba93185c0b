// Acceptance suite: every headline result at its stated tolerance, one
// pass/fail line per criterion.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hqst/analysis.hpp"
#include "hqst/budget.hpp"

#ifndef HQST_DATA_DIR
#define HQST_DATA_DIR "."
#endif

using namespace hqst;

namespace {

const LinkParams kRef{2.0, 1.0, 50.0, 2.0};

int failures = 0;

void report(int id, const std::string& label, bool ok, const std::string& detail) {
    std::printf("%s  %2d  %-42s %s\n", ok ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

void criterion(int id, const std::string& label,
               const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(id, label, ok, detail);
    } catch (const std::exception& e) {
        report(id, label, false, std::string("exception: ") + e.what());
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double uni(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// exponential-packet scenario for the impulse-limit checks
struct ImpulseSetup {
    ComplexSignal beta1;
    UnitaryParams u_phi;
    TimeGrid eval;

    ImpulseSetup() {
        const TimeGrid g = make_grid(0.0, 40.0, 1e-3);
        beta1 = ComplexSignal(g);
        for (std::size_t i = 0; i < g.n; ++i)
            beta1.values[i] = std::exp(-0.5 * kRef.gamma1 * g.t(i));
        const double Ti = 19.7354;
        u_phi = UnitaryParams{50.0, 0.5, Ti, std::numeric_limits<double>::infinity()};
        // window ends exactly at the packet corner
        eval = make_grid(Ti - 45.0, Ti, 2e-3);
    }

    double p(double x, double y, double z) const {
        UnitaryParams u = u_phi;
        u.omega0 += x;
        u.xi *= std::exp2(y);
        u.T += z;
        const auto phi = ideal_phi(beta1, kRef, u_phi, eval);
        const auto psi = synthesize_psi(beta1, kRef, u, eval);
        return p_success_overlap(phi, psi);
    }
};

std::vector<double> r0_matrix(ErrorVar v1, ErrorVar v2, double scale,
                              std::size_t n) {
    auto bound = [&](ErrorVar v) {
        return v == ErrorVar::delta_omega0 ? 3.0 * scale
               : v == ErrorVar::delta_lxi  ? 6.0 * scale
                                           : 7.5 * scale;
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
}

}  // namespace

int main() {
    const auto ref = make_logistic_scenario(kRef, 10.0);

    criterion(1, "reference transfer by both routes", [&] {
        UnitaryParams u_err = perturbed_unitary(ref, 0.0, 0.0, 0.0, 10.0);
        u_err.xi = 0.75;
        u_err.T = 17.0;
        const double po = p_success_point(ref, u_err);
        const double pd = p_success_ode(ref, u_err);
        const UnitaryParams u_ideal = perturbed_unitary(ref, 0.0, 0.0, 0.0, 10.0);
        const double po_i = p_success_point(ref, u_ideal);
        const double pd_i = p_success_ode(ref, u_ideal);
        const bool ok = std::abs(po - 0.186) <= 1e-3 && std::abs(pd - 0.186) <= 1e-3 &&
                        std::abs(po_i - 0.999995) <= 1e-4 &&
                        std::abs(pd_i - 0.999995) <= 1e-4;
        return std::pair{ok, "err " + num(po) + "/" + num(pd) + ", ideal " +
                                 num(po_i) + "/" + num(pd_i)};
    });

    criterion(2, "optimal timing parameter", [&] {
        const auto res = optimal_ts(ref.beta1, 10.0, ref.ideal.xi_i);
        const bool ok = std::abs(res.T_i_star - 19.7) <= 0.05;
        return std::pair{ok, "T* = " + num(res.T_i_star)};
    });

    criterion(3, "overlap vs dynamics across the error region", [&] {
        std::mt19937_64 rng(42);
        double worst = 0.0;
        for (int i = 0; i < 25; ++i) {
            const double x = uni(rng, -3.0, 3.0);
            const double y = uni(rng, -6.0, 6.0);
            const double z = uni(rng, -7.5, 7.5);
            const UnitaryParams u = perturbed_unitary(ref, x, y, z, 10.0);
            worst = std::max(worst,
                             std::abs(p_success_point(ref, u) - p_success_ode(ref, u)));
        }
        return std::pair{worst <= 1e-5, "max |diff| = " + num(worst)};
    });

    criterion(4, "frequency-error width and impulse limit", [&] {
        const AxisSpec ax{ErrorVar::delta_omega0, -3.0, 3.0, 201};
        const auto grid = sweep(ref, ax, std::nullopt, 10.0, 0);
        const double width = fwhm(ax.samples(), grid.values);
        const ImpulseSetup imp;
        double worst = 0.0;
        for (int i = -30; i <= 30; i += 3) {
            const double x = 0.1 * i;
            worst = std::max(worst,
                             std::abs(imp.p(x, 0, 0) - 1.0 / (1.0 + x * x)));
        }
        const bool ok = std::abs(width - 1.4) <= 0.05 && worst <= 1e-3;
        return std::pair{ok, "FWHM " + num(width) + ", Lorentzian dev " + num(worst)};
    });

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> s121(3), s121z(3), s61(3);
    criterion(5, "separability indices on the doubled region", [&] {
        const AxisSpec aT{ErrorVar::delta_T, -15.0, 15.0, 121};
        const AxisSpec aX{ErrorVar::delta_lxi, -12.0, 12.0, 121};
        const AxisSpec aW{ErrorVar::delta_omega0, -6.0, 6.0, 121};
        const auto gTX = sweep(ref, aT, aX, inf, 0);
        const auto gWX = sweep(ref, aW, aX, inf, 0);
        const auto gWT = sweep(ref, aW, aT, inf, 0);
        s121 = {separability_index(gTX, false), separability_index(gWX, false),
                separability_index(gWT, false)};
        s121z = {separability_index(gTX, true), separability_index(gWX, true),
                 separability_index(gWT, true)};
        const bool ok = std::abs(s121[0] - 0.87) <= 0.01 &&
                        std::abs(s121[1] - 0.87) <= 0.01 &&
                        std::abs(s121[2] - 0.998) <= 0.001 &&
                        std::abs(s121z[0] - 0.80) <= 0.01 &&
                        std::abs(s121z[1] - 0.80) <= 0.01 &&
                        std::abs(s121z[2] - 0.97) <= 0.01;
        return std::pair{ok, "S = " + num(s121[0]) + "/" + num(s121[1]) + "/" +
                                 num(s121[2]) + ", S0 = " + num(s121z[0]) + "/" +
                                 num(s121z[1]) + "/" + num(s121z[2])};
    });

    criterion(6, "index stability under grid halving", [&] {
        const AxisSpec aT{ErrorVar::delta_T, -15.0, 15.0, 61};
        const AxisSpec aX{ErrorVar::delta_lxi, -12.0, 12.0, 61};
        const AxisSpec aW{ErrorVar::delta_omega0, -6.0, 6.0, 61};
        s61 = {separability_index(sweep(ref, aT, aX, inf, 0), false),
               separability_index(sweep(ref, aW, aX, inf, 0), false),
               separability_index(sweep(ref, aW, aT, inf, 0), false)};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(s61[i] - s121[i]));
        return std::pair{worst < 0.005, "max |S61 - S121| = " + num(worst)};
    });

    criterion(7, "random-matrix separability baseline", [&] {
        const auto stats = random_matrix_baseline(61, 50, 20260809, false);
        const bool ok = std::abs(stats.mean - 0.758) <= 0.01;
        return std::pair{ok, "mean " + num(stats.mean) + ", std " + num(stats.stddev)};
    });

    criterion(8, "impulse-limit closed form and index ordering", [&] {
        const ImpulseSetup imp;
        std::mt19937_64 rng(9);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double x = uni(rng, -3.0, 3.0);
            const double y = uni(rng, -2.5, 2.5);
            const double z = uni(rng, -5.0, 5.0);
            worst = std::max(worst,
                             std::abs(imp.p(x, y, z) - psucc_closed_form_r0(x, y, z)));
        }
        const std::size_t n = 201;
        const double s = 4.0;
        auto mid = [&](ErrorVar v1, ErrorVar v2) {
            const auto m = r0_matrix(v1, v2, s, n);
            return 0.5 * (separability_index(m, n, n, false) +
                          separability_index(m, n, n, true));
        };
        const double sWT = mid(ErrorVar::delta_omega0, ErrorVar::delta_T);
        const double sWX = mid(ErrorVar::delta_omega0, ErrorVar::delta_lxi);
        const double sTX = mid(ErrorVar::delta_T, ErrorVar::delta_lxi);
        const bool ok = worst <= 1e-3 && std::abs(sWT - 1.00) <= 0.02 &&
                        std::abs(sWX - 0.85) <= 0.02 && std::abs(sTX - 0.78) <= 0.02 &&
                        sWT > sWX && sWX > sTX;
        return std::pair{ok, "quad dev " + num(worst) + ", S " + num(sWT) + " > " +
                                 num(sWX) + " > " + num(sTX)};
    });

    criterion(9, "producibility boundaries", [&] {
        const double gamma1 = 1.0;
        auto gauss = [&](double sigma) {
            const TimeGrid g = make_grid(-12.0 * sigma, 12.0 * sigma, sigma / 400.0);
            ComplexSignal B(g);
            const double amp = 1.0 / std::sqrt(gamma1 * sigma * std::sqrt(M_PI));
            for (std::size_t i = 0; i < g.n; ++i)
                B.values[i] = amp * std::exp(-g.t(i) * g.t(i) / (2.0 * sigma * sigma));
            return check_beta1_producible(B, gamma1);
        };
        // past sigma ~ 5 the violation drops under the verdict tolerance
        bool never = true;
        for (double sigma : {0.3, 1.0, 3.0, 5.0})
            never = never && !gauss(sigma).producible;
        const double w1 = gauss(1.0).max_weight;
        const double wt = gauss(1e-10).max_weight;

        auto sech_ok = [&](double sigma) {
            const TimeGrid g = make_grid(-20.0 * sigma, 20.0 * sigma, sigma / 400.0);
            ComplexSignal B(g);
            const double amp = 1.0 / std::sqrt(2.0 * gamma1 * sigma);
            for (std::size_t i = 0; i < g.n; ++i)
                B.values[i] = amp / std::cosh(g.t(i) / sigma);
            return check_beta1_producible(B, gamma1).producible;
        };
        const double step = 0.02;
        double flip = 0.0;
        for (double sigma = 1.9; sigma < 2.1; sigma += step) {
            if (!sech_ok(sigma) && sech_ok(sigma + step)) {
                flip = sigma + step;
                break;
            }
        }
        const bool ok = never && std::abs(w1 - 0.83) <= 0.01 && wt > 0.4e-10 &&
                        wt < 10e-10 && std::abs(flip - 2.0) <= step + 1e-9;
        return std::pair{ok, "w2(1/g) = " + num(w1) + ", w2(1e-10/g) = " + num(wt) +
                                 ", sech flip at " + num(flip)};
    });

    criterion(10, "closed-form cavity amplitudes", [&] {
        auto construct_dev = [&](double r, double k) {
            const LinkParams link{2.0 * k * r, 1.0, 0.0, k};
            const TimeGrid g = envelope_grid(k);
            const auto a = logistic_alpha1(link, g);
            const auto pulse = pulse_from_alpha1(a, link.gamma1);
            const auto b = beta1_from_alpha1(a, pulse);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.n; i += 3)
                worst = std::max(worst, std::abs(b.values[i].real() -
                                                 beta1_closed_form_logistic(link, g.t(i))));
            return worst;
        };
        const double d_half = construct_dev(0.5, 2.0);
        const double d_one = construct_dev(1.0, 1.0);
        const LinkParams tiny{2e-3, 1.0, 0.0, 1.0};  // r = 1e-3
        double d_asym = 0.0;
        for (double t = -5.0; t <= 8.0; t += 0.2)
            d_asym = std::max(d_asym, std::abs(beta1_closed_form_logistic(tiny, t) -
                                               beta1_small_r_logistic(tiny, t)));
        const bool ok = d_half <= 1e-6 && d_one <= 1e-6 && d_asym <= 2e-3;
        return std::pair{ok, "dev r=1/2: " + num(d_half) + ", r=1: " + num(d_one) +
                                 ", r->0: " + num(d_asym)};
    });

    criterion(11, "emission under spontaneous decay", [&] {
        bool ok = true;
        std::string detail;
        {
            const double r = 5.0, k = 1.0;
            const LinkParams link{2.0 * k * r, 1.0, 0.0, k};
            const auto sc = make_logistic_scenario(link, 10.0);
            for (double C1 : {1.0, 5.0, 20.0}) {
                const auto tr = integrate_with_decay(DecayModel::large_detuning(C1),
                                                     sc.pulse1, link, sc.beta1.grid);
                const auto [eta2, ov] = emission_metrics(tr, sc.beta1, link.gamma1);
                ok = ok && std::abs(eta2 - C1 / (1.0 + C1)) <= 0.01;
                if (C1 == 5.0) detail += "eff(C=5) " + num(eta2);
            }
        }
        for (double r : {0.25, 5.0}) {
            const double k = 1.0;
            const LinkParams link{2.0 * k * r, 1.0, 0.0, k};
            const auto sc = make_logistic_scenario(link, 10.0);
            const auto tr_i = integrate_with_decay(DecayModel::large_detuning(5.0),
                                                   sc.pulse1, link, sc.beta1.grid);
            const auto tr_ii = integrate_with_decay(DecayModel::finite_detuning(5.0),
                                                    sc.pulse1, link, sc.beta1.grid);
            const auto [e_i, o_i] = emission_metrics(tr_i, sc.beta1, link.gamma1);
            const auto [e_ii, o_ii] = emission_metrics(tr_ii, sc.beta1, link.gamma1);
            ok = ok && o_i >= 0.983 && o_i <= 0.995 && std::abs(o_i - o_ii) <= 0.002;
            detail += ", ovl(r=" + num(r) + ") " + num(o_i) + "/" + num(o_ii);
        }
        return std::pair{ok, detail};
    });

    criterion(12, "slowly varying pulse design", [&] {
        auto overlap_at = [&](double ratio) {
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
            return g1 * std::abs(inner_product(tr.signal_beta1(), target));
        };
        double prev = 0.0;
        bool mono = true;
        double last = 0.0;
        for (double ratio : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            last = overlap_at(ratio);
            mono = mono && last > prev;
            prev = last;
        }
        const bool ok = mono && last > 0.999;
        return std::pair{ok, "I(16) = " + num(last) + (mono ? ", monotone" : ", NOT monotone")};
    });

    criterion(13, "cooperativity table reproduction", [&] {
        const auto table = load_cooperativity_table(
            std::string(HQST_DATA_DIR) + "/cooperativity_table.csv");
        struct Printed {
            const char* label;
            double pem, pcav, ptot;  // percent; negative: not printed
        };
        const std::vector<Printed> printed = {
            {"ritter2012", 73.5, 90.0, 43.8},
            {"reiserer2013", 85.7, 92.2, 62.5},
            {"chibani2016", 98.5, 56.9, 31.4},
            {"morin2019", 74.6, 88.9, 44.0},
            {"daiss2021A", 88.5, 92.0, 66.3},
            {"daiss2021B", 87.3, 85.7, 56.0},
            {"deist2022", 82.1, -1.0, -1.0},
            {"keller2004", 45.5, 99.0, 20.3},
            {"steiner2014", 4.6, 32.3, 0.02},
            {"begley2016", 23.6, 87.0, 4.2},
            {"krutyanskiy2023A", 44.7, 20.0, 0.8},
            {"krutyanskiy2023B", 65.7, 78.0, 26.3},
            {"takahashi2020", 76.2, 20.0, 2.3},
        };
        bool ok = true;
        double worst = 0.0;
        for (const auto& p : printed) {
            const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                                         [&](const auto& r) { return r.label == p.label; });
            if (it == table.rows.end()) { ok = false; continue; }
            // one unit in the printed last digit absorbs the source rounding
            auto close = [&](double val, double want, double unit) {
                if (want < 0.0) return true;
                worst = std::max(worst, std::abs(val - want) / unit);
                return std::abs(val - want) <= unit + 1e-12;
            };
            const double pem = 100.0 * it->C_em / (1.0 + it->C_em);
            ok = ok && close(pem, p.pem, 0.1);
            if (it->C_cav > 0.0) {
                const double pcav = 100.0 * it->C_cav / (1.0 + it->C_cav);
                const double ptot = 100.0 * std::pow(pem * pcav * 1e-4, 2.0);
                ok = ok && close(pcav, p.pcav, 0.1);
                ok = ok && close(ptot, p.ptot, p.ptot < 0.1 ? 0.01 : 0.1);
            }
        }
        const auto avg = table.averages();
        ok = ok && std::abs(avg.C_em - 9.0) <= 0.05 && std::abs(avg.C_cav - 5.9) <= 0.05 &&
             std::abs(avg.C_em_trimmed - 3.6) <= 0.05 &&
             std::abs(avg.C_cav_trimmed - 5.8) <= 0.05;
        return std::pair{ok, "worst dev " + num(worst) + " ulp; averages " +
                                 num(avg.C_em) + "/" + num(avg.C_cav) + ", trimmed " +
                                 num(avg.C_em_trimmed) + "/" + num(avg.C_cav_trimmed)};
    });

    criterion(14, "repeat-until-success trial counts", [&] {
        const bool unit = ecz_worst_case_trials(0.0) == 1.0;
        // eps where the worst-case curve crosses ten trials
        double lo = 0.5, hi = 0.99;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (ecz_worst_case_trials(mid) < 10.0 ? lo : hi) = mid;
        }
        const double eps10 = 0.5 * (lo + hi);
        auto bare_p = [&](double C0) {
            const double ptot = std::pow(C0 / (1.0 + C0), 4.0);
            return (1.0 - eps10) / ptot;
        };
        const double p15 = bare_p(15.0), p5 = bare_p(5.0);
        bool both_errors = true;
        for (double eps : {0.1, 0.4, 0.8}) {
            const auto ch = EczChannel::systematic(std::sqrt(1.0 - eps),
                                                   std::sqrt(1.0 - eps),
                                                   std::sqrt(eps), 0.0);
            both_errors = both_errors &&
                          std::abs(ecz_expected_trials(ch) -
                                   ecz_both_errors_trials(eps)) < 1e-9;
        }
        const bool ok = unit && std::abs(eps10 - 0.747) <= 0.005 &&
                        std::abs(p15 - 0.33) <= 0.02 && std::abs(p5 - 0.53) <= 0.02 &&
                        both_errors;
        return std::pair{ok, "eps(E=10) = " + num(eps10) + ", bare P " + num(p15) +
                                 "/" + num(p5)};
    });

    criterion(15, "fidelity identities and packet overlap maximum", [&] {
        bool ok = true;
        for (double a : {0.2, 0.6, 1.0})
            ok = ok && fidelity({1.0, a, 0.9}) == a * a;
        const double dth = 0.77;
        ok = ok && std::abs(fidelity({0.5, 1.0, dth}) -
                            std::cos(dth / 2.0) * std::cos(dth / 2.0)) < 1e-12;
        // quadrature oracle for the Bloch average
        std::mt19937_64 rng(3);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const double a = uni(rng, 0.05, 1.0);
            const double d = uni(rng, 0.0, M_PI);
            const int n = 4000;
            double acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double th = M_PI * i / n;
                const double x = std::sin(th / 2.0) * std::sin(th / 2.0);
                const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                acc += w * fidelity({x, a, d});
            }
            acc /= 3.0 * n;
            worst = std::max(worst, std::abs(avg_fidelity(a, d) - acc));
        }
        ok = ok && worst <= 1e-6;
        // golden-section maximum of the delayed-mirror overlap
        const double gamma = 1.0;
        double lo = 0.1, hi = 6.0;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int i = 0; i < 100; ++i) {
            const double c = hi - gr * (hi - lo), d2 = lo + gr * (hi - lo);
            if (exp_packet_self_overlap(gamma, c) > exp_packet_self_overlap(gamma, d2))
                hi = d2;
            else
                lo = c;
        }
        const double argmax = 0.5 * (lo + hi);
        const double peak = exp_packet_self_overlap(gamma, argmax);
        ok = ok && std::abs(argmax - 2.0 / gamma) <= 1e-6 &&
             std::abs(peak - 4.0 / (M_E * M_E)) <= 1e-6;
        return std::pair{ok, "avg-fid dev " + num(worst) + ", argmax " + num(argmax) +
                                 ", peak " + num(peak)};
    });

    criterion(16, "thermal occupation scales", [&] {
        const double n_opt = thermal_occupation_wavelength(700e-9, 293.0);
        const double n_mw = thermal_occupation_wavelength(20e-3, 293.0);
        const bool ok = n_opt > 1e-31 && n_opt < 1e-30 &&
                        std::abs(n_mw - 400.0) <= 0.05 * 400.0;
        return std::pair{ok, "700nm: " + num(n_opt) + ", 20mm: " + num(n_mw)};
    });

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 16 criteria passed\n");
    return 0;
}
