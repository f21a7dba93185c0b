#include "hqst/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace hqst {

DecayModel DecayModel::large_detuning(double C1) {
    DecayModel m{Kind::large_detuning, C1, 0.0};
    m.validate();
    return m;
}

DecayModel DecayModel::finite_detuning(double C1) {
    DecayModel m{Kind::finite_detuning, C1, 0.0};
    m.Gamma_r = 1.0 / (5.0 * std::max(std::sqrt(C1), 4.0));
    m.validate();
    return m;
}

void DecayModel::validate() const {
    if (kind != Kind::none && !(C1 > 0.0))
        throw std::invalid_argument("DecayModel: C1 must be positive");
    if (Gamma_r < 0.0)
        throw std::invalid_argument("DecayModel: Gamma_r must be >= 0");
    if (kind == Kind::large_detuning && Gamma_r != 0.0)
        throw std::invalid_argument("DecayModel: large-detuning model has Gamma_r = 0");
}

ComplexSignal g2_time_reversed(const ComplexSignal& pulse1, double xi_i,
                               double T_i, const TimeGrid& eval) {
    if (!(xi_i > 0.0))
        throw std::invalid_argument("g2_time_reversed: xi_i must be positive");
    ComplexSignal out(eval);
    bool clipped = false;
    for (std::size_t i = 0; i < eval.n; ++i)
        out.values[i] = xi_i * interp(pulse1, xi_i * (T_i - eval.t(i)), &clipped);
    out.edge_clipped = clipped;
    return out;
}

namespace {

// e^{i zeta t} Psi(t) built from a node-1 cavity amplitude, phases exact
struct IncidentDrive {
    const ComplexSignal* beta1;
    double gamma1, zeta;
    UnitaryParams u;

    cplx operator()(double t) const {
        const bool all = u.transforms_everything();
        if (all || (t >= u.t_s() && t <= u.t_f())) {
            const cplx env = interp(*beta1, u.xi * (u.T - t));
            return std::sqrt(gamma1 * u.xi) * env *
                   std::polar(1.0, u.omega0 * u.T + (zeta - u.omega0) * t);
        }
        if (t > u.t_i() && t < u.t_s()) return {0.0, 0.0};
        return std::sqrt(gamma1) * interp(*beta1, t) * std::polar(1.0, zeta * t);
    }

    std::vector<double> breakpoints() const {
        // segment edges, plus the transformed image of the envelope window:
        // under strong compression the output is a narrow burst an adaptive
        // step could otherwise walk straight over
        std::vector<double> cuts;
        if (!u.transforms_everything()) {
            cuts.insert(cuts.end(), {u.t_i(), u.t_s(), u.t_f()});
        }
        const double lo = beta1->grid.t0, hi = beta1->grid.t_end();
        cuts.push_back(u.T - hi / u.xi);
        cuts.push_back(u.T - lo / u.xi);
        cuts.push_back(u.T);
        return cuts;
    }
};

std::vector<double> grid_times(const TimeGrid& g) {
    std::vector<double> t(g.n);
    for (std::size_t i = 0; i < g.n; ++i) t[i] = g.t(i);
    return t;
}

bool steady_tail(const TimeGrid& g, const std::vector<cplx>& a2) {
    const auto start = static_cast<std::size_t>(0.95 * static_cast<double>(g.n));
    double worst = 0.0;
    for (std::size_t i = std::max<std::size_t>(start, 1); i < g.n; ++i) {
        const double d = std::abs(std::norm(a2[i]) - std::norm(a2[i - 1])) / g.dt;
        worst = std::max(worst, d);
    }
    return worst < 1e-8;
}

Trajectory assemble(const TimeGrid& g, const ode::SampledSolution& node1,
                    const ode::SampledSolution& node2) {
    Trajectory tr;
    tr.grid = g;
    tr.alpha1.resize(g.n);
    tr.beta1.resize(g.n);
    tr.alpha2.resize(g.n);
    tr.beta2.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        tr.alpha1[i] = node1.states[i][0];
        tr.beta1[i] = node1.states[i][1];
        tr.alpha2[i] = node2.states[i][0];
        tr.beta2[i] = node2.states[i][1];
    }
    tr.steady = steady_tail(g, tr.alpha2);
    return tr;
}

}  // namespace

Trajectory integrate_ideal(const ComplexSignal& pulse1,
                           const ComplexSignal& pulse2, const LinkParams& link,
                           const UnitaryParams& u, const Amplitudes& init,
                           const TimeGrid& eval, const ode::Options& opt) {
    link.validate();
    u.validate();
    const double g1 = link.gamma1, g2 = link.gamma2;
    const auto times = grid_times(eval);

    auto rhs1 = [&](double t, const ode::State& y, ode::State& dy) {
        const double G1 = interp(pulse1, t).real();
        dy[0] = -G1 * y[1];
        dy[1] = G1 * y[0] - 0.5 * g1 * y[1];
    };
    auto node1 = ode::integrate_sampled(rhs1, eval.t0, eval.t_end(),
                                        {init[0], init[1]}, {}, times, opt);

    ComplexSignal beta1(eval);
    for (std::size_t i = 0; i < eval.n; ++i) beta1.values[i] = node1.states[i][1];

    const IncidentDrive drive{&beta1, g1, link.zeta, u};
    auto rhs2 = [&](double t, const ode::State& y, ode::State& dy) {
        const double G2 = interp(pulse2, t).real();
        dy[0] = -G2 * y[1];
        dy[1] = G2 * y[0] - 0.5 * g2 * y[1] - std::sqrt(g2) * drive(t);
    };
    auto node2 = ode::integrate_sampled(rhs2, eval.t0, eval.t_end(),
                                        {init[2], init[3]}, drive.breakpoints(),
                                        times, opt);
    return assemble(eval, node1, node2);
}

double verify_time_reversal(const Trajectory& traj, const LinkParams& link,
                            const UnitaryParams& u_ideal) {
    (void)link;
    const ComplexSignal a1 = traj.signal_alpha1();
    const ComplexSignal b1 = traj.signal_beta1();
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.grid.n; ++i) {
        const double t = traj.grid.t(i);
        const double arg = u_ideal.xi * (u_ideal.T - t);
        // reflected arguments before the window hold the prepared values
        cplx a_ref, b_ref;
        if (arg < traj.grid.t0) {
            a_ref = traj.alpha1.front();
            b_ref = traj.beta1.front();
        } else if (arg > traj.grid.t_end()) {
            a_ref = traj.alpha1.back();
            b_ref = traj.beta1.back();
        } else {
            a_ref = interp(a1, arg);
            b_ref = interp(b1, arg);
        }
        worst = std::max(worst, std::abs(std::abs(traj.alpha2[i]) - std::abs(a_ref)));
        worst = std::max(worst, std::abs(std::abs(traj.beta2[i]) - std::abs(b_ref)));
    }
    return worst;
}

Trajectory integrate_general(const ComplexSignal& drive1,
                             const ComplexSignal& drive2, double d1, double d2,
                             const LinkParams& link, const UnitaryParams& u,
                             const Amplitudes& init, const TimeGrid& eval,
                             const ode::Options& opt) {
    link.validate();
    u.validate();
    const double g1 = link.gamma1, g2 = link.gamma2;
    const auto times = grid_times(eval);
    const cplx i1(0.0, 1.0);

    auto rhs1 = [&](double t, const ode::State& y, ode::State& dy) {
        const cplx G = interp(drive1, t);
        dy[0] = -std::conj(G) * y[1];
        dy[1] = G * y[0] - (0.5 * g1 + i1 * d1) * y[1];
    };
    auto node1 = ode::integrate_sampled(rhs1, eval.t0, eval.t_end(),
                                        {init[0], init[1]}, {}, times, opt);

    ComplexSignal beta1(eval);
    for (std::size_t i = 0; i < eval.n; ++i) beta1.values[i] = node1.states[i][1];

    const IncidentDrive drive{&beta1, g1, link.zeta, u};
    auto rhs2 = [&](double t, const ode::State& y, ode::State& dy) {
        const cplx G = interp(drive2, t);
        dy[0] = -std::conj(G) * y[1];
        dy[1] = G * y[0] - (0.5 * g2 + i1 * d2) * y[1] - std::sqrt(g2) * drive(t);
    };
    auto node2 = ode::integrate_sampled(rhs2, eval.t0, eval.t_end(),
                                        {init[2], init[3]}, drive.breakpoints(),
                                        times, opt);
    return assemble(eval, node1, node2);
}

Trajectory integrate_with_decay(const DecayModel& model,
                                const ComplexSignal& pulse1,
                                const LinkParams& link, const TimeGrid& eval,
                                const ode::Options& opt) {
    link.validate();
    model.validate();
    if (model.kind == DecayModel::Kind::none)
        throw std::invalid_argument("integrate_with_decay: pick a decay model");
    const double g1 = link.gamma1;
    const double C1 = model.C1;
    const cplx den(1.0, model.Gamma_r);
    const bool finite = model.kind == DecayModel::Kind::finite_detuning;
    const double Gr2C = model.Gamma_r * model.Gamma_r * C1;

    auto rhs = [&](double t, const ode::State& y, ode::State& dy) {
        const double G = interp(pulse1, t).real();
        if (finite) {
            dy[0] = -(G / den) * y[1] - (2.0 * G * G / (g1 * C1 * den)) * y[0];
            dy[1] = (G / den) * y[0] - 0.5 * g1 * (1.0 + Gr2C / den) * y[1];
        } else {
            dy[0] = -G * y[1] - (2.0 * G * G / (g1 * C1)) * y[0];
            dy[1] = G * y[0] - 0.5 * g1 * y[1];
        }
    };
    const auto times = grid_times(eval);
    auto node1 = ode::integrate_sampled(rhs, eval.t0, eval.t_end(),
                                        {cplx{1.0, 0.0}, cplx{0.0, 0.0}}, {},
                                        times, opt);
    Trajectory tr;
    tr.grid = eval;
    tr.alpha1.resize(eval.n);
    tr.beta1.resize(eval.n);
    tr.alpha2.assign(eval.n, cplx{0.0, 0.0});
    tr.beta2.assign(eval.n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < eval.n; ++i) {
        tr.alpha1[i] = node1.states[i][0];
        tr.beta1[i] = node1.states[i][1];
    }
    tr.steady = true;
    return tr;
}

std::pair<double, double> emission_metrics(const Trajectory& traj,
                                           const ComplexSignal& target_beta1,
                                           double gamma1) {
    const ComplexSignal b1 = traj.signal_beta1();
    const double eta2 = gamma1 * norm_squared(b1);
    if (eta2 < 1e-18)
        throw std::domain_error("emission_metrics: no emission to compare");
    const ComplexSignal target = target_beta1.grid.same_as(traj.grid)
                                     ? target_beta1
                                     : resample(target_beta1, traj.grid);
    const cplx ov = inner_product(b1, target);
    const double overlap = std::norm(gamma1 * ov) / eta2;
    return {eta2, overlap};
}

}  // namespace hqst
