#pragma once

#include <optional>
#include <span>
#include <vector>

#include "novikov/characteristic.hpp"
#include "novikov/grid.hpp"
#include "novikov/semilinear.hpp"

namespace novikov {

// int (u^2 + u_x^2) dx
double energy_E(const GridFunction& u);
// int (u^4 + 2 u^2 u_x^2 - u_x^4 / 3) dx
double energy_F(const GridFunction& u);

struct WindowEnergy {
    double E = 0.0;
    double F = 0.0;
    double L = 0.0;  // int u_x^4 dx, i.e. int sin^4(alpha/2) xi dY
};

/**
 * Energies carried by the characteristics with labels in [Y1, Y2]:
 *   E: (u^2 cos^2 + sin^2) xi cos^2
 *   F: (u^4 cos^4 + 2 u^2 cos^2 sin^2) xi - L-density / 3
 *   L: sin^4 xi
 * with cos, sin of alpha/2. Partial end cells take the nearest node value
 * inside the window. Throws std::out_of_range if the window leaves the grid.
 */
WindowEnergy char_energy(const CharState& s, double Y1, double Y2);

// Whole-grid window.
WindowEnergy char_energy(const CharState& s);

struct BoundCheck {
    double value;
    double bound;
    bool holds() const { return value <= bound * (1.0 + 1e-12) + 1e-14; }
    double margin() const { return bound - value; }
};

struct BoundReport {
    double E = 0.0;
    double F = 0.0;
    double K = 0.0;  // sqrt(3 E (2E^2 - F))
    BoundCheck ux_L3;      // ||u_x||_{L^3}^3 <= K
    BoundCheck ux_L4;      // ||u_x||_{L^4}^4 <= 3 (2E^2 - F)
    BoundCheck P1_sup;     // <= 3/4 E^{3/2}
    BoundCheck dxP1_sup;
    BoundCheck P2_sup;     // <= K / 4
    BoundCheck dxP2_sup;
    BoundCheck P1_L2;      // <= 3/(2 sqrt 2) E^{3/2}
    BoundCheck dxP1_L2;
    BoundCheck P2_L2;      // <= K / (2 sqrt 2)
    BoundCheck dxP2_L2;
    bool all_hold() const;
};

// A-priori bounds of the conserved energies. Throws NumericalError
// ("energy inconsistency") if 2E^2 - F < 0.
BoundReport apriori_bounds(const GridFunction& u);

struct EnergyReport {
    double t = 0.0;
    double E_total = 0.0;
    double F_total = 0.0;
    struct Window {
        double Y1, Y2, E, F, L;
    };
    std::optional<Window> window;
    bool E_vanishes = false;
    bool L_positive = false;
    // W^{1,4} jump surrogate: int u_x^4 over the whole line on the last slice
    // before t*, and over the complement of the window at t*. Their difference
    // is the mass that leaves the absolutely continuous part.
    double ux4_total_before = 0.0;
    double ux4_outside_at_event = 0.0;
    std::size_t slice = 0;
};

inline constexpr double kEVanishFraction = 0.02;
inline constexpr double kLPositiveFraction = 0.05;

/**
 * Concentration diagnostics at the slice nearest the first singular event.
 * F_scale is F_total at t = 0. Throws NumericalError("no collision detected")
 * if `events` is empty.
 */
EnergyReport concentration_report(std::span<const CharState> traj,
                                   std::span<const SingularEvent> events,
                                   double Y1, double Y2, double F_scale);

// Integral of nodal values over [a, b] inside the uniform grid (Y0, dY).
double window_integral(std::span<const double> f, double Y0, double dY, double a, double b);

} // namespace novikov
