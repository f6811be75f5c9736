#pragma once

#include <span>
#include <vector>

#include "novikov/grid.hpp"
#include "novikov/tangent.hpp"

namespace novikov {

// P = 1/2 e^{-|x|} * (u^2 + u_x^2 / 2) and its x-derivative.
struct CHSources {
    GridFunction P;
    GridFunction Px;
};

CHSources ch_sources(const GridFunction& u);

struct CHRates {
    GridFunction u_t;   // -u u_x - P_x
    GridFunction ux_t;  // -u u_xx - u_x^2 / 2 + u^2 - P
};

// Throws NearBreakingError when max|u_x| exceeds kSlopeGuard.
CHRates ch_rhs(const GridFunction& u);

// 0.25 dx / max|u|.
double ch_step_limit(const GridFunction& u);

// RK4 step, split into equal substeps when dt exceeds ch_step_limit.
GridFunction ch_step(const GridFunction& u, double dt);

// States at t = 0, dt, ..., round(t_end / dt) dt.
std::vector<GridFunction> ch_evolve(const GridFunction& u0, double t_end, double dt);

// Rates of the linearized flow for (v, vx, w, wx); w is carried along u.
TangentFrame ch_tangent_rhs(const GridFunction& u, const TangentFrame& tf);

std::vector<TangentFrame> ch_evolve_tangent(std::span<const GridFunction> u_traj, double dt,
                                            const TangentFrame& tf0);

/**
 * Three-part transport cost (I4 stays 0):
 *   I1 = int |w| (1+u_x^2) e^{-|x|}
 *   I2 = int |v + u_x w| (1+u_x^2) e^{-|x|}
 *   I3 = int |2 u_x (v_x + u_xx w) + u_x^2 w_x| e^{-|x|}
 */
CostBreakdown ch_finsler_cost(const GridFunction& u, const TangentFrame& tf);

// Cheapest ch_finsler_cost over the default shift candidates.
double ch_norm_upper(const GridFunction& u, const TangentFrame& tf);

GrowthReport ch_verify_growth(std::span<const double> times, std::span<const GridFunction> u_traj,
                              std::span<const TangentFrame> tf_traj);

} // namespace novikov
