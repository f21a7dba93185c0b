#ifndef HQST_SIGNAL_HPP
#define HQST_SIGNAL_HPP

#include <complex>
#include <stdexcept>
#include <vector>

// Uniform time grids and sampled complex envelopes.  All times and rates
// are in natural units with gamma2 = c = 1.

namespace hqst {

using cplx = std::complex<double>;

struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 2;

    TimeGrid() = default;
    TimeGrid(double t0_, double dt_, std::size_t n_);

    double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double t_end() const { return t(n - 1); }
    double span() const { return dt * static_cast<double>(n - 1); }

    bool same_as(const TimeGrid& o, double tol = 1e-12) const;
};

// Grid over [a, b] with step at most dt_max and an even interval count, so
// composite Simpson applies.
TimeGrid make_grid(double a, double b, double dt_max, std::size_t n_min = 8);

struct ComplexSignal {
    TimeGrid grid;
    std::vector<cplx> values;
    // Set when a construction had to evaluate past a source window whose
    // edge value was not yet negligible.
    bool edge_clipped = false;

    ComplexSignal() = default;
    explicit ComplexSignal(TimeGrid g) : grid(g), values(g.n, cplx{0.0, 0.0}) {}
    ComplexSignal(TimeGrid g, std::vector<cplx> v);

    std::size_t size() const { return values.size(); }

    void ensure_finite() const;  // throws on NaN/Inf
};

// Composite-rule quadrature of conj(a)*b over the shared grid.  Simpson
// when the interval count is even, trapezoid otherwise.
cplx inner_product(const ComplexSignal& a, const ComplexSignal& b);

// inner_product(a, a).real(), clamped to >= 0.
double norm_squared(const ComplexSignal& a);

// Piecewise 4-point Lagrange interpolation of real and imaginary parts,
// exact at shared sample points.  Outside the source window the value is
// zero; a nonzero tail at the crossed edge sets edge_clipped on the result.
ComplexSignal resample(const ComplexSignal& a, const TimeGrid& target);

// Interpolated evaluation at a single time (same rule as resample).
// `clipped`, when given, is set if x falls outside a window with nonzero
// edge value.
cplx interp(const ComplexSignal& a, double x, bool* clipped = nullptr);

// Quadrature weights for the rule used by inner_product.
std::vector<double> quadrature_weights(const TimeGrid& g);

// Running integral C(i) = int_{t0}^{t(i)} f dt, fourth order on uniform
// data.  values must be the integrand samples.
std::vector<double> cumulative_integral(const TimeGrid& g,
                                        const std::vector<double>& f);

}  // namespace hqst

#endif
