#include <doctest.h>

#include <cmath>

#include "hqst/analysis.hpp"
#include "hqst/transform.hpp"

using namespace hqst;

namespace {
const LinkParams kRef{2.0, 1.0, 50.0, 2.0};
}

TEST_CASE("ideal parameters follow the link") {
    const auto p = ideal_params(kRef);
    CHECK(p.omega0_i == 50.0);
    CHECK(p.xi_i == 0.5);

    const auto id = ideal_params(LinkParams{1.0, 1.0, 0.0, 2.0});
    CHECK(id.omega0_i == 0.0);
    CHECK(id.xi_i == 1.0);

    const auto hybrid = ideal_params(LinkParams{1.0, 100.0, 2000.0, 2.0});
    CHECK(hybrid.xi_i == 100.0);
}

TEST_CASE("optimal timing of the reference case") {
    const auto sc = make_logistic_scenario(kRef, 10.0);
    CHECK(sc.ideal.T_i_star == doctest::Approx(19.7).epsilon(0.0026));  // +-0.05
    CHECK(sc.ideal.T_i_star / 3.0 ==
          doctest::Approx(sc.ideal.T_i_star * sc.ideal.xi_i / (1.0 + sc.ideal.xi_i)));
}

TEST_CASE("symmetric envelope centers the capture window on its peak") {
    const LinkParams link{2.0, 1.0, 0.0, 1.0};  // r = 1: sech envelope
    const TimeGrid g = envelope_grid(link.k);
    ComplexSignal b(g);
    for (std::size_t i = 0; i < g.n; ++i)
        b.values[i] = 0.5 / std::cosh(link.k * g.t(i));
    for (double tl : {2.0, 5.0, 9.0}) {
        const auto res = optimal_ts(b, tl, 1.0);
        CHECK_FALSE(res.mass_centering_fallback);
        CHECK(res.t_s_star == doctest::Approx(tl / 2.0).epsilon(1e-4));
    }
}

TEST_CASE("duration spanning the whole support falls back to mass centering") {
    const LinkParams link{2.0, 1.0, 0.0, 1.0};
    const TimeGrid g = envelope_grid(link.k);
    ComplexSignal b(g);
    for (std::size_t i = 0; i < g.n; ++i)
        b.values[i] = 0.5 / std::cosh(link.k * g.t(i));
    const auto res = optimal_ts(b, 4.0 * g.span(), 1.0);
    CHECK(res.mass_centering_fallback);
}

TEST_CASE("long one-sided envelopes balance leading tail against trailing value") {
    // exponential one-sided decay: density e^{-t} for t >= 0
    const TimeGrid g = make_grid(-2.0, 40.0, 5e-4);
    ComplexSignal b(g);
    for (std::size_t i = 0; i < g.n; ++i)
        b.values[i] = g.t(i) >= 0.0 ? std::exp(-0.5 * g.t(i)) : 0.0;
    for (double tl : {10.0, 20.0, 30.0}) {
        const auto res = optimal_ts(b, tl, 1.0);
        // the capture window slides until its leading edge reaches the onset
        CHECK(std::abs(res.t_s_star - tl) < 0.1);
    }
    CHECK_FALSE(optimal_ts(b, 10.0, 1.0).mass_centering_fallback);
}

TEST_CASE("balanced timing is a local maximum of the transfer probability") {
    const auto sc = make_logistic_scenario(kRef, 10.0);
    const double ts = sc.ideal.T_i_star / 3.0;
    const UnitaryParams best = perturbed_unitary(sc, 0.0, 0.0, 0.0, 10.0);
    const double p_best = p_success_point(sc, best);
    for (double delta : {0.1, 0.5, 1.0}) {
        for (double sign : {-1.0, 1.0}) {
            UnitaryParams u = best;
            u.T = (ts + sign * delta) * 3.0;
            CHECK(p_success_point(sc, u) <= p_best + 1e-6);
        }
    }
}

TEST_CASE("timing-consistency: matched T gives near-unit transfer") {
    const auto sc = make_logistic_scenario(kRef, 10.0);
    const double p = p_success_point(sc, perturbed_unitary(sc, 0.0, 0.0, 0.0, 10.0));
    CHECK(p >= 0.9999);
}

TEST_CASE("general timing objective reduces to the captured mass at large shift") {
    const auto sc = make_logistic_scenario(kRef, 10.0);
    for (double tl : {4.0, 10.0}) {
        UnitaryParams u{sc.ideal.omega0_i, sc.ideal.xi_i, sc.ideal.T_i_star, tl};
        const double obj = general_timing_objective(sc.beta1, sc.link, u);
        // simplified objective: captured mass between t_i and t_s
        const TimeGrid& g = sc.beta1.grid;
        std::vector<double> b2(g.n);
        for (std::size_t i = 0; i < g.n; ++i) b2[i] = std::norm(sc.beta1.values[i]);
        const auto C = cumulative_integral(g, b2);
        auto cum = [&](double x) {
            x = std::clamp(x, g.t0, g.t_end());
            const double pos = (x - g.t0) / g.dt;
            const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos), g.n - 2);
            const double w = pos - static_cast<double>(j);
            return (1.0 - w) * C[j] + w * C[j + 1];
        };
        const double mass = sc.link.gamma1 * (cum(u.t_s()) - cum(u.t_i()));
        CHECK(obj == doctest::Approx(mass).epsilon(2e-3));
    }
}

TEST_CASE("general timing objective keeps the untransformed tail when slow") {
    // zero shift, unit stretch: the passthrough term adds coherently
    const LinkParams link{1.0, 1.0, 0.0, 1.0};
    auto sc = make_logistic_scenario(link, 2.0);
    UnitaryParams u{0.0, 1.0, sc.ideal.T_i_star, 2.0};
    const double obj = general_timing_objective(sc.beta1, link, u);
    // captured mass alone
    const TimeGrid& g = sc.beta1.grid;
    std::vector<double> b2(g.n);
    for (std::size_t i = 0; i < g.n; ++i) b2[i] = std::norm(sc.beta1.values[i]);
    const auto C = cumulative_integral(g, b2);
    auto cum = [&](double x) {
        x = std::clamp(x, g.t0, g.t_end());
        const double pos = (x - g.t0) / g.dt;
        const auto j = std::min<std::size_t>(static_cast<std::size_t>(pos), g.n - 2);
        const double w = pos - static_cast<double>(j);
        return (1.0 - w) * C[j] + w * C[j + 1];
    };
    const double mass = link.gamma1 * (cum(u.t_s()) - cum(u.t_i()));
    CHECK(obj > mass + 1e-3);
}

TEST_CASE("full coverage makes the objective saturate") {
    const auto sc = make_logistic_scenario(kRef, 10.0);
    UnitaryParams u{sc.ideal.omega0_i, sc.ideal.xi_i, sc.ideal.T_i_star, 60.0};
    // window covering the entire support: everything is transformed
    const double obj = general_timing_objective(sc.beta1, sc.link, u);
    CHECK(obj == doctest::Approx(1.0).epsilon(1e-3));
}
