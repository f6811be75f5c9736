#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "novikov/grid.hpp"

namespace novikov {

/**
 * Unknowns of the semi-linear system sampled on a fixed, uniform grid of
 * characteristic labels Y_i = Y0 + i dY.
 *
 * alpha = 2 arctan(u_x) is kept unwrapped so that passages through odd
 * multiples of pi show up as level crossings. xi is the density of the
 * transformed energy measure relative to dY and must stay positive.
 */
struct CharState {
    double t = 0.0;
    double Y0 = 0.0;
    double dY = 1.0;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> alpha;
    std::vector<double> xi;

    std::size_t size() const { return u.size(); }
    double Y(std::size_t i) const { return Y0 + static_cast<double>(i) * dY; }
    double Y_end() const { return Y(size() - 1); }
    std::size_t center() const { return size() / 2; }

    // Equal lengths >= 8, finite entries, xi > 0.
    void validate() const;
};

// Y(x) = int_0^x (1 + u0_x^2)^2 dx' on the nodes of u0_x (cumulative trapezoid).
GridFunction characteristic_labels(const GridFunction& u0_x);

// Characteristic data with u0_x taken from centered differences of u0.
CharState to_characteristic(const GridFunction& u0);

// Same, with an explicitly supplied slope field (e.g. the exact slope of peakon data).
CharState to_characteristic(const GridFunction& u0, const GridFunction& u0_x);

/**
 * Initial datum given in closed form, with the x-locations where the slope
 * jumps (peaks). Used instead of a sampled GridFunction when the data have
 * kinks: labels are integrated piecewise between kinks, and the Y-grid is
 * shifted and stretched so the first and last kink labels sit exactly at
 * cell midpoints. Nodes then carry one-sided slopes and no node straddles
 * a jump, which keeps every Y-quadrature second order.
 */
struct InitialProfile {
    std::function<double(double)> u;
    std::function<double(double)> ux;
    std::vector<double> kinks;
};

/**
 * Optional grading of the labels around the kinks. The label density becomes
 * (1 + u_x^2)^2 (1 + strength sum_k e^{-|x - kink_k| / width}), and xi starts at
 * 1 / (1 + strength sum_k ...) instead of 1. The semi-linear system is
 * invariant under this relabeling (xi dY is unchanged); it only puts more
 * nodes where the flow later stretches the characteristics apart.
 * strength = 0 reproduces the plain labels.
 */
struct LabelGrading {
    double strength = 0.0;
    double width = 0.05;
};

// Y(x) for a profile, normalized so that Y(0) = 0.
double profile_label(const InitialProfile& p, double x, const LabelGrading& grading = {});

// n-node Y-grid covering the labels of [-half_width, half_width].
CharState to_characteristic(const InitialProfile& p, double half_width, std::size_t n,
                            const LabelGrading& grading = {});

// c(Y) = int_{Y_center}^{Y} xi cos^4(alpha/2) dY, the x-displacement relative to the center node.
std::vector<double> relative_positions(const CharState& s);

// Reintegrates x from x_Y = xi cos^4(alpha/2), anchored at the center node's tracked x.
std::vector<double> x_of_Y(const CharState& s);

// Samples u(t, .) on the nodes of `grid` from the parametric graph (x(Y), u(Y)).
GridFunction graph_to_x(const CharState& s, const GridFunction& grid);

} // namespace novikov
