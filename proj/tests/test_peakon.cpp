#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "novikov/grid.hpp"
#include "novikov/peakon.hpp"

using namespace novikov;

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Triple sum of the peakon equations, without factorisation.
PeakonRates direct_rhs(const PeakonState& s) {
    const std::size_t n = s.size();
    PeakonRates r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double e = s.p[j] * s.p[k] * std::exp(-std::abs(s.q[i] - s.q[j]) - std::abs(s.q[i] - s.q[k]));
                r.dq[i] += e;
                r.dp[i] += s.p[i] * sgn(s.q[i] - s.q[j]) * e;
            }
        }
    }
    return r;
}

} // namespace

TEST_CASE("single peakon travels at speed p^2 with constant amplitude") {
    const auto traj = integrate_peakons({0.0, {1.0}, {0.0}}, 2.0, 1e-3);
    CHECK(traj.halt == PeakonHalt::none);
    CHECK(traj.frames.size() == 2001);
    for (const auto& f : traj.frames) {
        CHECK(std::abs(f.q[0] - f.t) <= 1e-8);
        CHECK(std::abs(f.p[0] - 1.0) <= 1e-12);
    }
    const auto fast = integrate_peakons({0.0, {-2.0}, {1.0}}, 0.5, 1e-3);
    CHECK(fast.frames.back().q[0] == doctest::Approx(1.0 + 4.0 * 0.5).epsilon(1e-10));
}

TEST_CASE("factorised right-hand side matches the triple sum") {
    const PeakonState s{0.0, {1.0, -0.5, 0.3, 2.0}, {-1.2, -0.1, 0.4, 2.5}};
    const auto a = peakon_rhs(s);
    const auto b = direct_rhs(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(a.dq[i] == doctest::Approx(b.dq[i]).epsilon(1e-13));
        CHECK(a.dp[i] == doctest::Approx(b.dp[i]).epsilon(1e-13));
    }
}

TEST_CASE("peakon energy is conserved before the collision") {
    const PeakonState s0{0.0, {1.0, -0.5}, {-0.5, 0.5}};
    const auto traj = integrate_peakons(s0, 2.0, 1e-3);
    const double e0 = peakon_energy(s0);
    for (const auto& f : traj.frames) CHECK(peakon_energy(f) == doctest::Approx(e0).epsilon(1e-9));
}

TEST_CASE("peakon-antipeakon pair collides and the crossing is extrapolated") {
    const PeakonState s0{0.0, {1.0, -0.5}, {-0.5, 0.5}};
    const auto traj = integrate_peakons(s0, 20.0, 1e-3);
    CHECK(traj.halt == PeakonHalt::spacing_collapse);
    const auto c = detect_crossing(traj);
    REQUIRE(c.has_value());
    CHECK(c->t_star > 2.4);
    CHECK(c->t_star < 2.7);
    CHECK(c->t_star >= traj.frames.back().t);
    const auto& last = traj.frames.back();
    CHECK(last.q[1] - last.q[0] < 1e-7);
    CHECK(std::abs(c->q_star - last.q[0]) < 1e-2);
}

TEST_CASE("no crossing is reported for separating peakons") {
    const auto traj = integrate_peakons({0.0, {1.0, 2.0}, {0.0, 1.0}}, 1.0, 1e-3);
    CHECK(traj.halt == PeakonHalt::none);
    CHECK_FALSE(detect_crossing(traj).has_value());
}

TEST_CASE("invalid states are rejected") {
    CHECK_THROWS_AS(integrate_peakons({0.0, {}, {}}, 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons({0.0, {1.0, 1.0}, {1.0, 0.0}}, 1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons({0.0, {1.0}, {0.0}}, 1.0, -1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_peakons({0.0, {std::nan("")}, {0.0}}, 1.0, 1e-3), NumericalError);
}

TEST_CASE("peakon field, slope and energy agree") {
    const PeakonState s{0.0, {1.0, -0.5}, {-0.5, 0.5}};
    const auto grid = GridFunction::zeros(20.0, 8192);
    const auto u = peakon_field(s, grid);
    const auto ux = peakon_slope(s, grid);
    std::vector<double> dens(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) dens[i] = u.values[i] * u.values[i] + ux.values[i] * ux.values[i];
    CHECK(trapezoid_integral(dens, u.dx) == doctest::Approx(peakon_energy(s)).epsilon(5e-3));
    CHECK(peakon_energy({0.0, {1.0}, {3.0}}) == doctest::Approx(2.0));

    const auto prof = peakon_profile(s);
    REQUIRE(prof.kinks.size() == 2);
    CHECK(prof.u(0.2) == doctest::Approx(std::exp(-0.7) - 0.5 * std::exp(-0.3)));
    CHECK(prof.ux(0.2) == doctest::Approx(-std::exp(-0.7) - 0.5 * std::exp(-0.3)));
}
