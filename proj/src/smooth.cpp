#include "novikov/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace novikov {

XSources novikov_sources(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    std::vector<double> f1(u.size()), f2(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u.values[i], b = ux[i];
        f1[i] = 1.5 * a * b * b + a * a * a;
        f2[i] = 0.5 * b * b * b;
    }
    const auto g1 = u.with_values(std::move(f1));
    const auto g2 = u.with_values(std::move(f2));
    return {exp_convolution(g1, KernelMode::symmetric), exp_convolution(g1, KernelMode::antisymmetric),
            exp_convolution(g2, KernelMode::symmetric), exp_convolution(g2, KernelMode::antisymmetric)};
}

XRates novikov_rhs(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    if (sup_norm(ux) > kSlopeGuard) throw NearBreakingError();
    const auto uxx = second_derivative(u.values, u.dx);
    const auto src = novikov_sources(u);
    std::vector<double> ut(u.size()), uxt(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u.values[i], b = ux[i];
        ut[i] = -a * a * b - src.dxP1.values[i] - src.P2.values[i];
        uxt[i] = -a * a * uxx[i] - 0.5 * a * b * b + a * a * a - src.P1.values[i] - src.dxP2.values[i];
    }
    return {u.with_values(std::move(ut)), u.with_values(std::move(uxt))};
}

double smooth_step_limit(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, v * v);
    return m > 0.0 ? 0.25 * u.dx / m : std::numeric_limits<double>::infinity();
}

GridFunction smooth_step(const GridFunction& u, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("smooth_step: dt must be positive");
    const auto substeps = static_cast<std::size_t>(std::ceil(dt / smooth_step_limit(u)));
    const std::size_t m = std::max<std::size_t>(1, substeps);
    const double h = dt / static_cast<double>(m);
    GridFunction cur = u;
    const std::size_t n = u.size();
    auto shifted = [&](const GridFunction& base, const GridFunction& k, double a) {
        GridFunction out = base;
        for (std::size_t i = 0; i < n; ++i) out.values[i] += a * k.values[i];
        return out;
    };
    for (std::size_t s = 0; s < m; ++s) {
        const auto k1 = novikov_rhs(cur).u_t;
        const auto k2 = novikov_rhs(shifted(cur, k1, 0.5 * h)).u_t;
        const auto k3 = novikov_rhs(shifted(cur, k2, 0.5 * h)).u_t;
        const auto k4 = novikov_rhs(shifted(cur, k3, h)).u_t;
        for (std::size_t i = 0; i < n; ++i) {
            cur.values[i] += h / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
        }
    }
    return cur;
}

std::vector<GridFunction> smooth_evolve(const GridFunction& u0, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("smooth_evolve: bad time range");
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    std::vector<GridFunction> out{u0};
    out.reserve(steps + 1);
    for (std::size_t k = 0; k < steps; ++k) out.push_back(smooth_step(out.back(), dt));
    return out;
}

} // namespace novikov
