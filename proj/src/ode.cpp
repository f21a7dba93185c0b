#include "hqst/ode.hpp"

#include <algorithm>
#include <cmath>

namespace hqst::ode {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// y5 - y4 error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double initial_step(const Rhs& f, double t0, const State& y0, const State& f0,
                    double rtol, double atol, double span) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sk = atol + rtol * std::abs(y0[i]);
        dnf += std::norm(f0[i] / sk);
        dny += std::norm(y0[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * span
                                              : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, span);
    // one explicit Euler probe to refine
    State y1(y0.size()), f1(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i) y1[i] = y0[i] + h * f0[i];
    f(t0 + h, y1, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sk = atol + rtol * std::abs(y0[i]);
        der2 += std::norm((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6 * span, h * 1e-3)
                                       : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, span});
}

}  // namespace

State integrate(const Rhs& f, double t0, double t1, State y, const Options& opt,
                const std::function<void(const DenseStep&)>& sink) {
    const std::size_t dim = y.size();
    const double span = t1 - t0;
    if (!(span > 0.0)) return y;

    State k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    State ytmp(dim), ynew(dim);
    DenseStep ds;

    double t = t0;
    f(t, y, k1);
    double h = opt.h_init > 0.0 ? std::min(opt.h_init, span)
                                : initial_step(f, t0, y, k1, opt.rtol, opt.atol, span);
    const double h_min = opt.h_min_factor * span;

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        // a remaining sliver below the floor is roundoff from the last clamp
        if (t1 - t <= h_min) return y;
        if (h < h_min) throw StiffnessError(t);
        h = std::min(h, t1 - t);

        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a21 * k1[i]);
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += std::norm(e / sk);
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (err <= 1.0) {
            if (sink) {
                ds.t0 = t;
                ds.h = h;
                ds.r1.assign(y.begin(), y.end());
                ds.r2.resize(dim);
                ds.r3.resize(dim);
                ds.r4.resize(dim);
                ds.r5.resize(dim);
                for (std::size_t i = 0; i < dim; ++i) {
                    const cplx ydiff = ynew[i] - y[i];
                    const cplx bspl = h * k1[i] - ydiff;
                    ds.r2[i] = ydiff;
                    ds.r3[i] = bspl;
                    ds.r4[i] = ydiff - h * k7[i] - bspl;
                    ds.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                    d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                sink(ds);
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            const double fac =
                std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
    throw std::runtime_error("ode: step budget exhausted");
}

SampledSolution integrate_sampled(const Rhs& f, double t0, double t1, State y0,
                                  const std::vector<double>& breakpoints,
                                  const std::vector<double>& sample_times,
                                  const Options& opt) {
    SampledSolution out;
    out.times = sample_times;
    out.states.resize(sample_times.size());

    std::size_t next = 0;
    // samples before the start hold the initial state
    while (next < sample_times.size() && sample_times[next] <= t0 + 1e-300) {
        out.states[next] = y0;
        ++next;
    }

    auto sink = [&](const DenseStep& ds) {
        while (next < sample_times.size() &&
               sample_times[next] <= ds.t0 + ds.h * (1.0 + 1e-12)) {
            ds.eval(std::min(sample_times[next], ds.t0 + ds.h), out.states[next]);
            ++next;
        }
    };

    std::vector<double> cuts;
    for (double b : breakpoints)
        if (b > t0 && b < t1) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(t1);

    double t = t0;
    State y = std::move(y0);
    for (double c : cuts) {
        if (c - t > 1e-14 * (t1 - t0))
            y = integrate(f, t, c, std::move(y), opt, sink);
        t = c;
    }
    for (; next < out.states.size(); ++next) out.states[next] = y;
    return out;
}

}  // namespace hqst::ode
