#include "hqst/transform.hpp"

#include <algorithm>
#include <cmath>

namespace hqst {

IdealParams ideal_params(const LinkParams& link) {
    link.validate();
    IdealParams p;
    p.omega0_i = link.zeta;
    p.xi_i = link.gamma2 / link.gamma1;
    return p;
}

namespace {

// |beta1|^2 at time x, zero outside the sampled window
double mass_density(const ComplexSignal& beta1, double x) {
    return std::norm(interp(beta1, x));
}

}  // namespace

TimingResult optimal_ts(const ComplexSignal& beta1, double t_l, double xi_i) {
    if (!(t_l > 0.0)) throw std::invalid_argument("optimal_ts: t_l must be positive");
    if (!(xi_i > 0.0)) throw std::invalid_argument("optimal_ts: xi_i must be positive");
    const TimeGrid& g = beta1.grid;

    std::vector<double> b2(g.n);
    double total = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        b2[i] = std::norm(beta1.values[i]);
        total += b2[i];
    }
    if (total <= 0.0)
        throw std::domain_error("optimal_ts: envelope carries no mass");

    const auto C = cumulative_integral(g, b2);
    auto captured = [&](double ts) {
        // int_{ts - t_l}^{ts} |beta1|^2
        auto cum = [&](double x) {
            if (x <= g.t0) return 0.0;
            if (x >= g.t_end()) return C.back();
            const double pos = (x - g.t0) / g.dt;
            const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos), g.n - 2);
            const double u = pos - static_cast<double>(j);
            return (1.0 - u) * C[j] + u * C[j + 1];
        };
        return cum(ts) - cum(ts - t_l);
    };

    // scan the balance function h(ts) = b2(ts) - b2(ts - t_l) over a range
    // wide enough that the capture window can slide fully past the support
    const double lo = g.t0, hi = g.t_end() + t_l;
    const double step = g.dt;
    const auto nscan = static_cast<std::size_t>((hi - lo) / step) + 1;

    auto h = [&](double ts) { return mass_density(beta1, ts) - mass_density(beta1, ts - t_l); };

    double peak_density = 0.0;
    for (double v : b2) peak_density = std::max(peak_density, v);

    TimingResult best{};
    double best_mass = -1.0;
    double prev_t = lo, prev_h = h(lo);
    for (std::size_t i = 1; i < nscan; ++i) {
        const double t = lo + static_cast<double>(i) * step;
        const double ht = h(t);
        if ((prev_h > 0.0 && ht <= 0.0) || (prev_h < 0.0 && ht >= 0.0)) {
            double a = prev_t, b = t, fa = prev_h;
            for (int it = 0; it < 80 && (b - a) > 1e-6; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = h(m);
                if ((fa <= 0.0) == (fm <= 0.0)) { a = m; fa = fm; } else { b = m; }
            }
            const double root = 0.5 * (a + b);
            // a balance of two vanished tails is no root: the window spans
            // the whole support
            if (mass_density(beta1, root) < 1e-12 * peak_density) continue;
            const double mass = captured(root);
            if (mass > best_mass) {
                best_mass = mass;
                best.t_s_star = root;
            }
        }
        prev_t = t;
        prev_h = ht;
    }

    if (best_mass < 0.0) {
        // duration spans the entire support: center the capture window on it
        best.mass_centering_fallback = true;
        for (std::size_t i = 0; i < nscan; ++i) {
            const double t = lo + static_cast<double>(i) * step;
            const double mass = captured(t);
            if (mass > best_mass) {
                best_mass = mass;
                best.t_s_star = t;
            }
        }
    }

    best.T_i_star = best.t_s_star * (1.0 + 1.0 / xi_i);
    return best;
}

double general_timing_objective(const ComplexSignal& beta1,
                                const LinkParams& link, const UnitaryParams& u) {
    u.validate();
    const TimeGrid eval = evaluation_grid(link, u);
    UnitaryParams u_inf = u;
    u_inf.t_l = std::numeric_limits<double>::infinity();
    const ComplexSignal phi = ideal_phi(beta1, link, u_inf, eval);
    const ComplexSignal phi_l = synthesize_psi(beta1, link, u, eval);
    return inner_product(phi, phi_l).real();
}

}  // namespace hqst
