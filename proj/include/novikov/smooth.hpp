#pragma once

#include <vector>

#include "novikov/error.hpp"
#include "novikov/grid.hpp"

namespace novikov {

// P1 = p * (3/2 u u_x^2 + u^3), P2 = 1/2 p * u_x^3 with p = 1/2 e^{-|x|}.
struct XSources {
    GridFunction P1;
    GridFunction dxP1;
    GridFunction P2;
    GridFunction dxP2;
};

XSources novikov_sources(const GridFunction& u);

struct XRates {
    GridFunction u_t;
    GridFunction ux_t;
};

inline constexpr double kSlopeGuard = 10.0;

/// u_t and its x-derivative; throws NearBreakingError when max|u_x| > 10.
XRates novikov_rhs(const GridFunction& u);

// Largest stable step for the centered transport term: 0.25 dx / max u^2.
double smooth_step_limit(const GridFunction& u);

/**
 * Advances u by dt with classical RK4. If dt exceeds smooth_step_limit the
 * step is split into equal substeps that respect it.
 */
GridFunction smooth_step(const GridFunction& u, double dt);

// States at t = 0, dt, ..., round(t_end / dt) dt.
std::vector<GridFunction> smooth_evolve(const GridFunction& u0, double t_end, double dt);

} // namespace novikov
