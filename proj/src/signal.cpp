#include "hqst/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hqst/kernels.hpp"

namespace hqst {

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n_)
    : t0(t0_), dt(dt_), n(n_) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (n < 2) throw std::invalid_argument("TimeGrid: need at least two samples");
}

bool TimeGrid::same_as(const TimeGrid& o, double tol) const {
    return n == o.n && std::abs(t0 - o.t0) <= tol * std::max(1.0, std::abs(t0)) &&
           std::abs(dt - o.dt) <= tol * dt;
}

TimeGrid make_grid(double a, double b, double dt_max, std::size_t n_min) {
    if (!(b > a)) throw std::invalid_argument("make_grid: empty window");
    if (!(dt_max > 0.0)) throw std::invalid_argument("make_grid: dt_max must be positive");
    auto intervals = static_cast<std::size_t>(std::ceil((b - a) / dt_max));
    intervals = std::max<std::size_t>(intervals, n_min);
    if (intervals % 2) ++intervals;
    return TimeGrid(a, (b - a) / static_cast<double>(intervals), intervals + 1);
}

ComplexSignal::ComplexSignal(TimeGrid g, std::vector<cplx> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw std::invalid_argument("ComplexSignal: sample count does not match grid");
}

void ComplexSignal::ensure_finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("ComplexSignal: non-finite sample");
}

std::vector<double> quadrature_weights(const TimeGrid& g) {
    std::vector<double> w(g.n);
    const std::size_t intervals = g.n - 1;
    if (intervals % 2 == 0) {
        // composite Simpson
        const double c = g.dt / 3.0;
        w[0] = c;
        w[g.n - 1] = c;
        for (std::size_t i = 1; i < g.n - 1; ++i) w[i] = (i % 2 ? 4.0 : 2.0) * c;
    } else {
        const double c = g.dt;
        w[0] = 0.5 * c;
        w[g.n - 1] = 0.5 * c;
        for (std::size_t i = 1; i < g.n - 1; ++i) w[i] = c;
    }
    return w;
}

cplx inner_product(const ComplexSignal& a, const ComplexSignal& b) {
    if (!a.grid.same_as(b.grid))
        throw GridMismatchError("inner_product: signals on different grids");
    const auto w = quadrature_weights(a.grid);
    return kernels::dot_conj_weighted(w.data(), a.values.data(), b.values.data(), a.size());
}

double norm_squared(const ComplexSignal& a) {
    const auto w = quadrature_weights(a.grid);
    const double s = kernels::norm_weighted(w.data(), a.values.data(), a.size());
    return std::max(s, 0.0);
}

namespace {

cplx interp_at(const ComplexSignal& a, double x, bool* clipped, double tail_tol) {
    const TimeGrid& g = a.grid;
    const double lo = g.t0, hi = g.t_end();
    if (x < lo || x > hi) {
        if (clipped) {
            const cplx edge = (x < lo) ? a.values.front() : a.values.back();
            if (std::abs(edge) > tail_tol) *clipped = true;
        }
        return {0.0, 0.0};
    }
    double pos = (x - lo) / g.dt;
    auto j = static_cast<std::ptrdiff_t>(std::floor(pos));
    // 4-point stencil [j-1, j+2] clamped to the window
    std::ptrdiff_t s = j - 1;
    s = std::clamp<std::ptrdiff_t>(s, 0, static_cast<std::ptrdiff_t>(g.n) - 4);
    const double u = pos - static_cast<double>(s);  // in [0,3] within the stencil
    const double u0 = u, u1 = u - 1.0, u2 = u - 2.0, u3 = u - 3.0;
    const double c0 = -u1 * u2 * u3 / 6.0;
    const double c1 = u0 * u2 * u3 / 2.0;
    const double c2 = -u0 * u1 * u3 / 2.0;
    const double c3 = u0 * u1 * u2 / 6.0;
    const cplx* v = a.values.data() + s;
    return c0 * v[0] + c1 * v[1] + c2 * v[2] + c3 * v[3];
}

}  // namespace

cplx interp(const ComplexSignal& a, double x, bool* clipped) {
    if (a.grid.n < 4) {
        // fall back to linear on degenerate inputs
        const TimeGrid& g = a.grid;
        if (x < g.t0 || x > g.t_end()) return {0.0, 0.0};
        const double pos = (x - g.t0) / g.dt;
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos), g.n - 2);
        const double u = pos - static_cast<double>(j);
        return (1.0 - u) * a.values[j] + u * a.values[j + 1];
    }
    return interp_at(a, x, clipped, 1e-9);
}

ComplexSignal resample(const ComplexSignal& a, const TimeGrid& target) {
    if (target.same_as(a.grid)) return a;
    ComplexSignal out(target);
    bool clipped = false;
    for (std::size_t i = 0; i < target.n; ++i)
        out.values[i] = interp(a, target.t(i), &clipped);
    out.edge_clipped = clipped;
    return out;
}

std::vector<double> cumulative_integral(const TimeGrid& g,
                                        const std::vector<double>& f) {
    if (f.size() != g.n)
        throw std::invalid_argument("cumulative_integral: size mismatch");
    const std::size_t n = g.n;
    std::vector<double> c(n, 0.0);
    const double h = g.dt;
    if (n < 4) {
        for (std::size_t i = 1; i < n; ++i)
            c[i] = c[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        return c;
    }
    // int_{t_i}^{t_{i+1}} via the cubic through the four surrounding samples
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double step;
        if (i == 0) {
            step = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (i + 2 >= n) {
            step = h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
        } else {
            step = h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        }
        c[i + 1] = c[i] + step;
    }
    return c;
}

}  // namespace hqst
