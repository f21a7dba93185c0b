#ifndef HQST_ODE_HPP
#define HQST_ODE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

// Embedded Dormand-Prince 5(4) with fourth-order dense output, on small
// complex state vectors.

namespace hqst::ode {

using cplx = std::complex<double>;
using State = std::vector<cplx>;
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

struct StiffnessError : std::runtime_error {
    double t;
    explicit StiffnessError(double t_)
        : std::runtime_error("ode: step size underflow at t = " + std::to_string(t_)),
          t(t_) {}
};

struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;       // 0: automatic
    double h_min_factor = 1e-14;  // relative to the span
    std::size_t max_steps = 2'000'000;
};

// Dense interpolant over one accepted step.
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    std::vector<cplx> r1, r2, r3, r4, r5;

    void eval(double t, State& y) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        y.resize(r1.size());
        for (std::size_t i = 0; i < r1.size(); ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
};

// Integrates from t0 to t1 (t1 > t0).  `sink`, when given, is called once
// per accepted step with the dense interpolant valid on [step.t0,
// step.t0+step.h].  Returns the final state.
State integrate(const Rhs& f, double t0, double t1, State y,
                const Options& opt = {},
                const std::function<void(const DenseStep&)>& sink = nullptr);

// Convenience: integrate across [t0, t1] split at interior breakpoints
// (where the right-hand side may be non-smooth), sampling the solution at
// every grid time in [t0, t1].
struct SampledSolution {
    std::vector<double> times;
    std::vector<State> states;
};

SampledSolution integrate_sampled(const Rhs& f, double t0, double t1, State y0,
                                  const std::vector<double>& breakpoints,
                                  const std::vector<double>& sample_times,
                                  const Options& opt = {});

}  // namespace hqst::ode

#endif
