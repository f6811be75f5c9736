#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "novikov/camassa_holm.hpp"
#include "novikov/energy.hpp"

using namespace novikov;

namespace {

constexpr double L = 20.0;
constexpr std::size_t N = 4096;

GridFunction gaussian(double amp) {
    return GridFunction::sample(L, N, [amp](double x) { return amp * std::exp(-x * x); });
}

} // namespace

TEST_CASE("pressure of a peakon in closed form") {
    const auto u = GridFunction::sample(20.0, 65536, [](double x) { return std::exp(-std::abs(x)); });
    const auto src = ch_sources(u);
    for (std::size_t i = 0; i < u.size(); i += 4099) {
        const double x = std::abs(u.x(i));
        CHECK(src.P.values[i] == doctest::Approx(std::exp(-x) - 0.5 * std::exp(-2.0 * x)).epsilon(1e-3).scale(1.0));
    }
}

TEST_CASE("H1 energy is conserved by the CH flow") {
    const auto u0 = gaussian(0.5);
    const auto traj = ch_evolve(u0, 0.5, 1e-2);
    const double e0 = energy_E(u0);
    for (const auto& u : traj) CHECK(std::abs(energy_E(u) - e0) / e0 < 1e-5);
}

TEST_CASE("slope rate is the derivative of the velocity rate") {
    const auto u = gaussian(0.5);
    const auto r = ch_rhs(u);
    const auto d = derivative(r.u_t);
    for (std::size_t i = 1; i + 1 < N; i += 61) {
        CHECK(d.values[i] == doctest::Approx(r.ux_t.values[i]).epsilon(1e-4).scale(1.0));
    }
}

TEST_CASE("CH translation tangent pays only the shift and is transported") {
    const auto u0 = gaussian(0.5);
    const auto ux = derivative(u0.values, u0.dx);
    const auto uxx = second_derivative(u0.values, u0.dx);
    TangentFrame tf = TangentFrame::zero(N);
    for (std::size_t i = 0; i < N; ++i) {
        tf.v[i] = -0.3 * ux[i];
        tf.vx[i] = -0.3 * uxx[i];
        tf.w[i] = 0.3;
    }
    const auto c = ch_finsler_cost(u0, tf);
    CHECK(c.I2 <= 1e-6 * c.I1);
    CHECK(c.I3 <= 1e-6 * c.I1);
    CHECK(c.I4 == 0.0);

    const auto traj = ch_evolve(u0, 0.5, 1e-2);
    const auto frames = ch_evolve_tangent(traj, 1e-2, tf);
    const auto uxT = derivative(traj.back().values, u0.dx);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) err = std::max(err, std::abs(frames.back().v[i] + uxT[i] * frames.back().w[i]));
    CHECK(err < 1e-4);
}

TEST_CASE("CH flat background costs |h| per unit weight") {
    TangentFrame tf = TangentFrame::zero(N);
    tf.w.assign(N, -0.7);
    const auto c = ch_finsler_cost(GridFunction::zeros(L, N), tf);
    CHECK(std::abs(c.total - 2.0 * 0.7 * (1.0 - std::exp(-L))) <= 1e-6);
}

TEST_CASE("CH growth stays under the fitted exponential") {
    const auto u0 = gaussian(0.5);
    const double dt = 0.02;
    const auto traj = ch_evolve(u0, 0.4, dt);
    std::vector<double> v(N), w(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = u0.x(i);
        v[i] = 0.2 * x * std::exp(-x * x) + 0.1 * std::exp(-(x - 1.0) * (x - 1.0));
        w[i] = 0.05 * std::exp(-0.5 * x * x);
    }
    const auto frames = ch_evolve_tangent(traj, dt, TangentFrame::from_fields(v, w, u0.dx));
    std::vector<double> times;
    for (std::size_t k = 0; k < traj.size(); ++k) times.push_back(dt * static_cast<double>(k));
    const auto rep = ch_verify_growth(times, traj, frames);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(rep.norms[k] <= std::exp(rep.fitted_rate * times[k]) * rep.norms[0] * 1.05);
    }
}
