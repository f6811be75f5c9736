#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "novikov/characteristic.hpp"
#include "novikov/grid.hpp"

namespace novikov {

/**
 * First-order perturbation of a reference solution u on the same x-grid:
 * v is the vertical change u^eps = u + eps v, w the horizontal shift
 * x^eps = x + eps w. vx and wx are carried as separate fields.
 */
struct TangentFrame {
    std::vector<double> v;
    std::vector<double> vx;
    std::vector<double> w;
    std::vector<double> wx;

    std::size_t size() const { return v.size(); }

    // Throws std::invalid_argument unless all four fields have n entries,
    // NumericalError on non-finite entries.
    void validate(std::size_t n) const;

    static TangentFrame zero(std::size_t n);
    // vx and wx from centered differences of v and w.
    static TangentFrame from_fields(std::vector<double> v, std::vector<double> w, double dx);
};

struct CostBreakdown {
    double I1 = 0.0;  // horizontal shift
    double I2 = 0.0;  // vertical change along the shifted point
    double I3 = 0.0;  // change of the slope angle
    double I4 = 0.0;  // change of the base measure
    double total = 0.0;
};

// Weight::none drops the e^{-|x|} factor (the unweighted distance).
enum class Weight { exponential, none };

/**
 * Transport cost of a tangent frame:
 *   I1 = int |w| (1+u_x^2)^2 e^{-|x|}
 *   I2 = int |v + u_x w| (1+u_x^2)^2 e^{-|x|}
 *   I3 = int |v_x + u_xx w| (1+u_x^2) e^{-|x|}
 *   I4 = int |4 (u_x + u_x^3)(v_x + u_xx w) + (1+u_x^2)^2 w_x| e^{-|x|}
 * u_x and u_xx by centered differences, integrals by trapezoid.
 */
CostBreakdown finsler_cost(const GridFunction& u, const TangentFrame& tf,
                           Weight weight = Weight::exponential);

using CostFunction = std::function<CostBreakdown(const GridFunction&, const TangentFrame&)>;

// A horizontal shift (w, w_x) proposed for the vertical part of a frame.
struct Shift {
    std::vector<double> w;
    std::vector<double> wx;
};
using ShiftCandidate = std::function<Shift(const GridFunction& u, const TangentFrame& tf)>;

ShiftCandidate zero_shift();
// The frame's own w, e.g. the one transported along the flow.
ShiftCandidate own_shift();
// Constant shift h minimizing int (v + u_x h)^2, i.e. h = -int v u_x / int u_x^2.
ShiftCandidate matched_translation_shift();
// {zero, own, matched translation}.
std::vector<ShiftCandidate> default_shift_candidates();

struct NormEstimate {
    double value = 0.0;
    std::size_t candidate = 0;  // index of the cheapest candidate
    CostBreakdown cost;
};

/**
 * Cheapest cost over the candidate shifts. The true norm is an infimum over
 * all admissible shifts, so this is an upper bound on it.
 * Throws std::invalid_argument on an empty candidate set.
 */
NormEstimate norm_upper(const GridFunction& u, const TangentFrame& tf,
                        std::span<const ShiftCandidate> candidates, const CostFunction& cost);

double finsler_norm_upper(const GridFunction& u, const TangentFrame& tf,
                          std::span<const ShiftCandidate> candidates,
                          Weight weight = Weight::exponential);
double finsler_norm_upper(const GridFunction& u, const TangentFrame& tf);

/**
 * Linear tangent dynamics along a reference solution: the right-hand side
 * for (v, vx, w, wx) given u, and the largest stable substep for u.
 */
struct TangentDynamics {
    std::function<TangentFrame(const GridFunction& u, const TangentFrame& tf)> rhs;
    std::function<double(const GridFunction& u)> step_limit;
};

/**
 * RK4 along a stored trajectory u_traj[k] = u(k dt). Within a step u is
 * interpolated linearly in time; steps longer than the dynamics' limit are
 * split into equal substeps. Returns one frame per trajectory entry.
 */
std::vector<TangentFrame> evolve_linear_tangent(std::span<const GridFunction> u_traj, double dt,
                                                const TangentFrame& tf0,
                                                const TangentDynamics& dyn);

// Rates of the linearized Novikov flow for (v, vx, w, wx).
TangentFrame tangent_rhs(const GridFunction& u, const TangentFrame& tf);

// Frames along a smooth Novikov trajectory. Propagates NearBreakingError.
std::vector<TangentFrame> evolve_tangent(std::span<const GridFunction> u_traj, double dt,
                                         const TangentFrame& tf0);

struct GrowthReport {
    std::vector<double> times;
    std::vector<double> norms;
    // Least-squares slope of log(norms[k] / norms[0]) against t_k - t_0,
    // fitted through the origin. 0 for a vanishing initial norm.
    double fitted_rate = 0.0;
    double max_ratio = 0.0;  // max_k norms[k] / norms[0]
};

using NormFunction = std::function<double(const GridFunction&, const TangentFrame&)>;

GrowthReport growth_report(std::span<const double> times, std::span<const GridFunction> u_traj,
                           std::span<const TangentFrame> tf_traj, const NormFunction& norm);

// Growth of finsler_norm_upper with the default candidates.
GrowthReport verify_growth(std::span<const double> times, std::span<const GridFunction> u_traj,
                           std::span<const TangentFrame> tf_traj);

/**
 * Length of a path sampled at uniform theta in [0, 1]. Tangents are
 * centered theta-differences (one-sided second order at the ends) with
 * w = 0 in the frame; each sample costs finsler_norm_upper over the given
 * candidates, and the samples are integrated by trapezoid.
 * Throws std::invalid_argument for fewer than 3 samples or mismatched grids.
 */
double path_length(std::span<const GridFunction> path, std::span<const ShiftCandidate> candidates,
                   Weight weight = Weight::exponential);
double path_length(std::span<const GridFunction> path, Weight weight = Weight::exponential);

/**
 * Length of the straight path theta u2 + (1 - theta) u with no shift, an
 * upper bound on the geodesic distance between u and u2.
 */
double geodesic_upper_bound(const GridFunction& u, const GridFunction& u2, std::size_t n_theta = 33,
                            Weight weight = Weight::exponential);

/**
 * ||u - u2||_{H^1} + ||(u - u2) e^{-|x|}||_{L^1} + ||(u_x - u2_x) e^{-|x|}||_{L^1}
 * + ||u_x - u2_x||_{L^4}.
 */
double sobolev_comparison(const GridFunction& u, const GridFunction& u2);

// int |u - u2| e^{-|x|} dx
double weighted_L1_distance(const GridFunction& u, const GridFunction& u2);

/**
 * |int f (1+u_x^2)^2 dx - int f (1+u2_x^2)^2 dx| for a test function with
 * sup|f| <= 1 and sup|f'| <= 1 (checked on the grid up to 1e-6).
 * Throws std::invalid_argument if f is not such a test function.
 */
double kr_discrepancy(const GridFunction& u, const GridFunction& u2, const GridFunction& f);

// First-order perturbation (X, U, A, zeta) of the characteristic unknowns.
struct CharTangent {
    std::vector<double> X;
    std::vector<double> U;
    std::vector<double> A;
    std::vector<double> zeta;

    void validate(const CharState& s) const;
};

/**
 * Cost of a characteristic tangent with fixed labels:
 * sum over the integrals in Y of |X xi|, |U xi|, |A xi| / 2 and |zeta|,
 * each weighted by e^{-|x(Y)|}.
 */
double char_cost(const CharState& s, const CharTangent& ct);

/**
 * The characteristic tangent of an x-space frame with fixed labels:
 *   X = w, U = v + u_x w, A = 2 cos^2(alpha/2) (v_x + u_xx w),
 *   zeta = x_Y [4 (u_x + u_x^3)(v_x + u_xx w) + (1+u_x^2)^2 w_x],
 * where x_Y = xi cos^4(alpha/2) and u_x = tan(alpha/2). The frame and u_xx
 * are interpolated at x(Y).
 */
CharTangent char_tangent_from_frame(const CharState& s, const GridFunction& u, const TangentFrame& tf);

} // namespace novikov
