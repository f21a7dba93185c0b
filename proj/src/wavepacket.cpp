#include "hqst/wavepacket.hpp"

#include <algorithm>
#include <cmath>

#include "hqst/special.hpp"

namespace hqst {

namespace {

constexpr double eps_div = 1e-12;
constexpr double eps_tail = 1e-15;

void require_real(const ComplexSignal& s, const char* what) {
    for (const auto& v : s.values)
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
            throw std::invalid_argument(std::string(what) + ": expected a real signal");
}

// five-point central difference, one-sided at the edges
std::vector<double> derivative(const ComplexSignal& s) {
    const std::size_t n = s.grid.n;
    const double h = s.grid.dt;
    auto v = [&](std::size_t i) { return s.values[i].real(); };
    std::vector<double> d(n);
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) d[i] = (v(1) - v(0)) / h;
            else if (i + 1 == n) d[i] = (v(n - 1) - v(n - 2)) / h;
            else d[i] = (v(i + 1) - v(i - 1)) / (2.0 * h);
        }
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-v(i + 2) + 8.0 * v(i + 1) - 8.0 * v(i - 1) + v(i - 2)) / (12.0 * h);
    d[0] = (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) / (12.0 * h);
    d[1] = (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) / (12.0 * h);
    d[n - 2] = (3.0 * v(n - 1) + 10.0 * v(n - 2) - 18.0 * v(n - 3) + 6.0 * v(n - 4) -
                v(n - 5)) / (12.0 * h);
    d[n - 1] = (25.0 * v(n - 1) - 48.0 * v(n - 2) + 36.0 * v(n - 3) -
                16.0 * v(n - 4) + 3.0 * v(n - 5)) / (12.0 * h);
    return d;
}

// beta1^2(t) for a real alpha1 prepared at the grid start:
//   S(t) = e^{-gamma1 (t - t0)} S(t0) + int_{t0}^{t} e^{-gamma1 (t - t')}
//          (-2 alpha1' alpha1) dt',   S(t0) = 1 - alpha1^2(t0).
// The damped running integral keeps everything bounded regardless of
// gamma1 * span, and the integrand is nonnegative for monotone decreasing
// amplitudes, so small values stay relatively accurate.
std::vector<double> beta1_squared_series(const ComplexSignal& alpha1,
                                         double gamma1,
                                         const std::vector<double>& da) {
    const std::size_t n = alpha1.grid.n;
    const double h = alpha1.grid.dt;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = -2.0 * da[i] * alpha1.values[i].real();

    const double decay = std::exp(-gamma1 * h);
    auto q = [&](std::size_t j, std::size_t ip1) {
        // e^{gamma1 (t_j - t_{i+1})} f(t_j); the exponent stays O(gamma1 h)
        const double dj = (static_cast<double>(j) - static_cast<double>(ip1)) * h;
        return std::exp(gamma1 * dj) * f[j];
    };
    std::vector<double> out(n);
    const double a0 = alpha1.values[0].real();
    out[0] = std::max(0.0, 1.0 - a0 * a0);
    double S = out[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double step;
        if (n < 4) {
            step = 0.5 * h * (q(i, i + 1) + q(i + 1, i + 1));
        } else if (i == 0) {
            step = h / 24.0 * (9.0 * q(0, 1) + 19.0 * q(1, 1) - 5.0 * q(2, 1)
                               + q(3, 1));
        } else if (i + 2 >= n) {
            step = h / 24.0 * (9.0 * q(n - 1, n - 1) + 19.0 * q(n - 2, n - 1) -
                               5.0 * q(n - 3, n - 1) + q(n - 4, n - 1));
        } else {
            step = h / 24.0 * (-q(i - 1, i + 1) + 13.0 * q(i, i + 1) +
                               13.0 * q(i + 1, i + 1) - q(i + 2, i + 1));
        }
        S = decay * S + step;
        out[i + 1] = S;
    }
    return out;
}

}  // namespace

void LinkParams::validate() const {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(k > 0.0))
        throw std::invalid_argument("LinkParams: gamma1, gamma2, k must be positive");
}

void UnitaryParams::validate() const {
    if (!(xi > 0.0)) throw std::invalid_argument("UnitaryParams: xi must be positive");
    if (!(t_l >= 0.0)) throw std::invalid_argument("UnitaryParams: t_l must be >= 0");
}

ComplexSignal logistic_alpha1(const LinkParams& link, const TimeGrid& grid) {
    link.validate();
    ComplexSignal out(grid);
    for (std::size_t i = 0; i < grid.n; ++i)
        out.values[i] = 0.5 * (1.0 + std::tanh(-link.k * grid.t(i)));
    return out;
}

ComplexSignal pulse_from_alpha1(const ComplexSignal& alpha1, double gamma1) {
    require_real(alpha1, "pulse_from_alpha1");
    const double a0 = alpha1.values[0].real();
    if (std::abs(a0 - 1.0) > 1e-6)
        throw std::invalid_argument(
            "pulse_from_alpha1: alpha1 must start at 1 (empty cavity)");

    const auto da = derivative(alpha1);
    const auto S = beta1_squared_series(alpha1, gamma1, da);
    for (double s : S)
        if (s < -Producibility::tolerance)
            throw ProducibilityError(
                "pulse_from_alpha1: alpha1 violates the emission constraint");

    double damax = 0.0;
    for (double d : da) damax = std::max(damax, std::abs(d));
    const double da_floor = std::max(eps_div, 1e-9 * damax);

    ComplexSignal out(alpha1.grid);
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double b = std::sqrt(std::max(S[i], 0.0));
        if (b > eps_div)
            out.values[i] = -da[i] / b;
        else if (std::abs(da[i]) <= da_floor)
            out.values[i] = 0.0;
        else
            throw ProducibilityError(
                "pulse_from_alpha1: drive diverges (empty cavity, moving atom)");
    }
    return out;
}

ComplexSignal beta1_from_alpha1(const ComplexSignal& alpha1,
                                const ComplexSignal& pulse) {
    if (!alpha1.grid.same_as(pulse.grid))
        throw GridMismatchError("beta1_from_alpha1: signals on different grids");
    require_real(alpha1, "beta1_from_alpha1");

    const auto da = derivative(alpha1);
    double damax = 0.0;
    for (double d : da) damax = std::max(damax, std::abs(d));
    const double da_floor = std::max(eps_div, 1e-9 * damax);
    const std::size_t n = alpha1.grid.n;
    ComplexSignal out(alpha1.grid);
    std::vector<bool> valid(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = pulse.values[i].real();
        if (std::abs(g) > eps_div) {
            out.values[i] = -da[i] / g;
            valid[i] = true;
        } else if (std::abs(da[i]) > da_floor) {
            throw std::domain_error(
                "beta1_from_alpha1: vanishing drive against a moving amplitude");
        }
    }
    // where drive and derivative both vanish the amplitude rings down (or
    // up, on the leading side) freely: continue the one-sided geometric
    // trend of the last resolved samples
    std::ptrdiff_t last = -1;
    cplx ratio{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (valid[i]) {
            if (last == static_cast<std::ptrdiff_t>(i) - 1 &&
                std::abs(out.values[last]) > 0.0) {
                ratio = out.values[i] / out.values[last];
                if (std::abs(ratio) > 1.0) ratio /= std::abs(ratio);
            }
            last = static_cast<std::ptrdiff_t>(i);
            continue;
        }
        if (last >= 0) out.values[i] = out.values[i - 1] * ratio;
    }
    std::ptrdiff_t first = -1;
    for (std::size_t i = n; i-- > 0;)
        if (valid[i]) first = static_cast<std::ptrdiff_t>(i);
    if (first > 0 && static_cast<std::size_t>(first) + 1 < n && valid[first + 1] &&
        std::abs(out.values[first + 1]) > 0.0) {
        cplx rho = out.values[first] / out.values[first + 1];
        if (std::abs(rho) > 1.0) rho /= std::abs(rho);
        for (std::ptrdiff_t i = first - 1; i >= 0; --i)
            out.values[i] = out.values[i + 1] * rho;
    } else if (first > 0) {
        for (std::ptrdiff_t i = 0; i < first; ++i) out.values[i] = out.values[first];
    }
    return out;
}

double beta1_closed_form_logistic(const LinkParams& link, double t) {
    link.validate();
    const double k = link.k;
    const double r = link.r();
    const double z = std::exp(k * t);
    const double z2 = z * z;
    if (std::abs(r - 0.5) < 1e-14) {
        const double val = 2.0 * std::atan(z) +
                           (1.0 / std::cosh(k * t)) * std::tanh(k * t);
        return 0.5 * std::exp(-0.5 * k * t) * std::sqrt(std::max(val, 0.0));
    }
    if (std::abs(r - 1.0) < 1e-14) return 0.5 / std::cosh(k * t);
    const double L = special::lerch_phi_s1(-z2, 1.0 + r);
    const double inv = 1.0 / (1.0 + z2);
    const double val = inv * inv + (1.0 - r) * (inv - r * L);
    return z * std::sqrt(std::max(val, 0.0));
}

double beta1_small_r_logistic(const LinkParams& link, double t) {
    const double k = link.k;
    const double g1 = link.gamma1;
    const double q = 1.0 / (1.0 + std::exp(2.0 * k * t));
    if (t < 0.0) return std::sqrt(std::max(1.0 - q * q, 0.0));
    return std::sqrt(std::max(std::exp(-g1 * t) - q * q, 0.0));
}

Producibility check_alpha1_producible(const ComplexSignal& alpha1, double gamma1) {
    require_real(alpha1, "check_alpha1_producible");
    // constraint expression 1 - I(t) equals e^{gamma1 (t - t0)} beta1^2(t)
    const auto da = derivative(alpha1);
    const auto S = beta1_squared_series(alpha1, gamma1, da);
    const double h = alpha1.grid.dt;
    double margin = std::numeric_limits<double>::infinity();
    double worst_I = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < S.size(); ++i) {
        const double growth = gamma1 * h * static_cast<double>(i);
        double expr;  // 1 - I(t_i) = S[i] * e^{growth}
        const double mag = std::abs(S[i]);
        if (mag < 1e-300) {
            expr = 0.0;
        } else {
            const double lg = std::log(mag) + growth;
            expr = (lg > 700.0) ? std::copysign(HUGE_VAL, S[i])
                                : std::copysign(std::exp(lg), S[i]);
        }
        margin = std::min(margin, expr);
        worst_I = std::max(worst_I, 1.0 - expr);
    }
    Producibility p;
    p.margin = margin;
    p.producible = margin >= -Producibility::tolerance;
    p.max_weight = p.producible ? 1.0 : std::min(1.0, 1.0 / std::max(worst_I, 1.0));
    return p;
}

Producibility check_beta1_producible(const ComplexSignal& envelope, double gamma1) {
    require_real(envelope, "check_beta1_producible");
    // I(t) = 2 int (B' + gamma1 B / 2) B dt' = B^2(t) - B^2(t0) + gamma1 int B^2
    const auto& g = envelope.grid;
    std::vector<double> b2(g.n);
    for (std::size_t i = 0; i < g.n; ++i) b2[i] = std::norm(envelope.values[i]);
    const auto C = cumulative_integral(g, b2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        worst = std::max(worst, b2[i] - b2[0] + gamma1 * C[i]);
    Producibility p;
    p.margin = 1.0 - worst;
    p.producible = p.margin >= -Producibility::tolerance;
    p.max_weight = p.producible ? 1.0 : 1.0 / worst;
    return p;
}

SlowPulseDesign pulse_from_beta1_slowly_varying(const ComplexSignal& psi,
                                                double gamma1) {
    const auto& g = psi.grid;
    std::vector<double> mag2(g.n);
    for (std::size_t i = 0; i < g.n; ++i) mag2[i] = std::norm(psi.values[i]);
    const auto C = cumulative_integral(g, mag2);
    const double total = C.back();

    SlowPulseDesign out{ComplexSignal(g), ComplexSignal(g)};
    for (std::size_t i = 0; i < g.n; ++i) {
        const double tail = std::max(total - C[i], eps_tail);
        out.pulse.values[i] =
            0.5 * std::sqrt(gamma1) * std::abs(psi.values[i]) / std::sqrt(tail);
        out.theta0.values[i] = -std::arg(psi.values[i]);
    }
    return out;
}

ComplexSignal ideal_phi(const ComplexSignal& beta1, const LinkParams& link,
                        const UnitaryParams& u, const TimeGrid& eval) {
    u.validate();
    ComplexSignal out(eval);
    bool clipped = false;
    const double amp = std::sqrt(link.gamma2);
    // carrier e^{i omega0 (T - t)} advanced by a constant rotation per
    // sample, re-anchored periodically against drift
    const cplx rot = std::polar(1.0, -u.omega0 * eval.dt);
    cplx phase = std::polar(1.0, u.omega0 * (u.T - eval.t0));
    for (std::size_t i = 0; i < eval.n; ++i) {
        if ((i & 511u) == 0u && i)
            phase = std::polar(1.0, u.omega0 * (u.T - eval.t(i)));
        const double arg = u.xi * (u.T - eval.t(i));
        const cplx env = interp(beta1, arg, &clipped);
        out.values[i] = amp * phase * env;
        phase *= rot;
    }
    out.edge_clipped = clipped;
    return out;
}

ComplexSignal synthesize_psi(const ComplexSignal& beta1, const LinkParams& link,
                             const UnitaryParams& u, const TimeGrid& eval) {
    u.validate();
    ComplexSignal out(eval);
    bool clipped = false;
    const double amp_pass = std::sqrt(link.gamma1);
    const double amp_tr = std::sqrt(link.gamma1 * u.xi);
    const bool all = u.transforms_everything();
    const double ts = all ? -std::numeric_limits<double>::infinity() : u.t_s();
    const double ti = all ? -std::numeric_limits<double>::infinity() : u.t_i();
    const double tf = all ? std::numeric_limits<double>::infinity() : u.t_f();
    for (std::size_t i = 0; i < eval.n; ++i) {
        const double t = eval.t(i);
        if (!all && t > ti && t < ts) {
            out.values[i] = 0.0;  // blocked while the device captures
        } else if (t >= ts && t <= tf) {
            const cplx env = interp(beta1, u.xi * (u.T - t), &clipped);
            out.values[i] = amp_tr * std::polar(1.0, u.omega0 * (u.T - t)) * env;
        } else {
            out.values[i] = amp_pass * interp(beta1, t, &clipped);
        }
    }
    out.edge_clipped = clipped;
    return out;
}

TimeGrid envelope_grid(double k, double gamma1) {
    if (!(k > 0.0)) throw std::invalid_argument("envelope_grid: k must be positive");
    double hi = 15.0 / k;
    if (gamma1 > 0.0) {
        const double tail_rate = 0.5 * std::min(gamma1, 4.0 * k);
        hi = std::min(15.0 / k + 21.0 / tail_rate, 45.0 / k);
    }
    return make_grid(-15.0 / k, hi, 1.0 / (200.0 * k));
}

TimeGrid evaluation_grid(const LinkParams& link, const UnitaryParams& u_ideal,
                         int samples_per_cycle) {
    const double k = link.k;
    const double lo = -15.0 / k;
    const double out_end = u_ideal.transforms_everything() ? u_ideal.T : u_ideal.t_f();
    double hi = std::max(out_end, 15.0 / k) + 15.0 / (u_ideal.xi * k);
    const double wmax = std::max({std::abs(u_ideal.omega0), std::abs(link.zeta), 1.0});
    const double dt_carrier = 2.0 * M_PI / (wmax * samples_per_cycle);
    const double dt_env = 1.0 / (static_cast<double>(samples_per_cycle) * k *
                                 std::max(1.0, u_ideal.xi));
    return make_grid(lo, hi, std::min(dt_carrier, dt_env));
}

}  // namespace hqst
