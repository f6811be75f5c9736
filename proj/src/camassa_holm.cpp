#include "novikov/camassa_holm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "novikov/error.hpp"
#include "novikov/smooth.hpp"

namespace novikov {

CHSources ch_sources(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    std::vector<double> f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = u.values[i] * u.values[i] + 0.5 * ux[i] * ux[i];
    const auto g = u.with_values(std::move(f));
    return {exp_convolution(g, KernelMode::symmetric), exp_convolution(g, KernelMode::antisymmetric)};
}

CHRates ch_rhs(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    if (sup_norm(ux) > kSlopeGuard) throw NearBreakingError();
    const auto uxx = second_derivative(u.values, u.dx);
    const auto src = ch_sources(u);
    std::vector<double> ut(u.size()), uxt(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u.values[i], b = ux[i];
        ut[i] = -a * b - src.Px.values[i];
        uxt[i] = -a * uxx[i] - 0.5 * b * b + a * a - src.P.values[i];
    }
    return {u.with_values(std::move(ut)), u.with_values(std::move(uxt))};
}

double ch_step_limit(const GridFunction& u) {
    const double m = sup_norm(u.values);
    return m > 0.0 ? 0.25 * u.dx / m : std::numeric_limits<double>::infinity();
}

GridFunction ch_step(const GridFunction& u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("ch_step: dt must be positive");
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt / ch_step_limit(u))));
    const double h = dt / static_cast<double>(m);
    const std::size_t n = u.size();
    auto shifted = [n](const GridFunction& base, const GridFunction& k, double a) {
        GridFunction out = base;
        for (std::size_t i = 0; i < n; ++i) out.values[i] += a * k.values[i];
        return out;
    };
    GridFunction cur = u;
    for (std::size_t s = 0; s < m; ++s) {
        const auto k1 = ch_rhs(cur).u_t;
        const auto k2 = ch_rhs(shifted(cur, k1, 0.5 * h)).u_t;
        const auto k3 = ch_rhs(shifted(cur, k2, 0.5 * h)).u_t;
        const auto k4 = ch_rhs(shifted(cur, k3, h)).u_t;
        for (std::size_t i = 0; i < n; ++i) {
            cur.values[i] += h / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
        }
    }
    return cur;
}

std::vector<GridFunction> ch_evolve(const GridFunction& u0, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("ch_evolve: bad time range");
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    std::vector<GridFunction> out{u0};
    out.reserve(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) out.push_back(ch_step(out.back(), dt));
    return out;
}

TangentFrame ch_tangent_rhs(const GridFunction& u, const TangentFrame& tf) {
    const std::size_t n = u.size();
    const auto ux = derivative(u.values, u.dx);
    if (sup_norm(ux) > kSlopeGuard) throw NearBreakingError();
    const auto uxx = second_derivative(u.values, u.dx);
    const auto vxx = derivative(tf.vx, u.dx);
    const auto wxx = derivative(tf.wx, u.dx);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * u.values[i] * tf.v[i] + ux[i] * tf.vx[i];
    const auto gf = u.with_values(std::move(g));
    const auto S = exp_convolution(gf, KernelMode::symmetric);
    const auto A = exp_convolution(gf, KernelMode::antisymmetric);

    TangentFrame r = TangentFrame::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u.values[i], b = ux[i], c = uxx[i];
        const double v = tf.v[i], vx = tf.vx[i], w = tf.w[i];
        r.v[i] = -a * vx - b * v - A.values[i];
        r.vx[i] = -a * vxx[i] - b * vx - c * v + 2.0 * a * v - S.values[i];
        r.w[i] = -a * tf.wx[i] + v + b * w;
        r.wx[i] = -a * wxx[i] + vx + c * w;
    }
    return r;
}

std::vector<TangentFrame> ch_evolve_tangent(std::span<const GridFunction> u_traj, double dt,
                                            const TangentFrame& tf0) {
    return evolve_linear_tangent(u_traj, dt, tf0, {ch_tangent_rhs, ch_step_limit});
}

CostBreakdown ch_finsler_cost(const GridFunction& u, const TangentFrame& tf) {
    u.validate();
    tf.validate(u.size());
    const std::size_t n = u.size();
    const auto ux = derivative(u.values, u.dx);
    const auto uxx = second_derivative(u.values, u.dx);
    const auto q = exp_weight_quadrature(u);
    CostBreakdown c;
    for (std::size_t i = 0; i < n; ++i) {
        const double b = ux[i];
        const double a = 1.0 + b * b;
        const double slope = tf.vx[i] + uxx[i] * tf.w[i];
        c.I1 += q[i] * std::abs(tf.w[i]) * a;
        c.I2 += q[i] * std::abs(tf.v[i] + b * tf.w[i]) * a;
        c.I3 += q[i] * std::abs(2.0 * b * slope + b * b * tf.wx[i]);
    }
    c.total = c.I1 + c.I2 + c.I3;
    return c;
}

double ch_norm_upper(const GridFunction& u, const TangentFrame& tf) {
    const auto candidates = default_shift_candidates();
    return norm_upper(u, tf, candidates, ch_finsler_cost).value;
}

GrowthReport ch_verify_growth(std::span<const double> times, std::span<const GridFunction> u_traj,
                              std::span<const TangentFrame> tf_traj) {
    return growth_report(times, u_traj, tf_traj, ch_norm_upper);
}

} // namespace novikov
