#include "novikov/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novikov/error.hpp"
#include "novikov/smooth.hpp"

namespace novikov {

namespace {

struct Densities {
    std::vector<double> E, F, L;
};

Densities char_densities(const CharState& s) {
    const std::size_t n = s.size();
    Densities d{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double ch = std::cos(0.5 * s.alpha[i]), sh = std::sin(0.5 * s.alpha[i]);
        const double c2 = ch * ch, s2 = sh * sh;
        const double u = s.u[i], u2 = u * u, xi = s.xi[i];
        d.E[i] = (u2 * c2 + s2) * xi * c2;
        d.L[i] = s2 * s2 * xi;
        d.F[i] = (u2 * u2 * c2 * c2 + 2.0 * u2 * c2 * s2) * xi - d.L[i] / 3.0;
    }
    return d;
}

double integrate(std::span<const double> f, double h) {
    return cumulative_trapezoid(f, h).back();
}

double l2_norm(const GridFunction& g) {
    std::vector<double> sq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g.values[i] * g.values[i];
    return std::sqrt(integrate(sq, g.dx));
}

} // namespace

double energy_E(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = u.values[i] * u.values[i] + ux[i] * ux[i];
    return integrate(d, u.dx);
}

double energy_F(const GridFunction& u) {
    u.validate();
    const auto ux = derivative(u.values, u.dx);
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double a2 = u.values[i] * u.values[i], b2 = ux[i] * ux[i];
        d[i] = a2 * a2 + 2.0 * a2 * b2 - b2 * b2 / 3.0;
    }
    return integrate(d, u.dx);
}

double window_integral(std::span<const double> f, double Y0, double dY, double a, double b) {
    const std::size_t n = f.size();
    const double Yend = Y0 + static_cast<double>(n - 1) * dY;
    const double slack = 1e-9 * dY;
    if (!(a < b) || a < Y0 - slack || b > Yend + slack) {
        throw std::out_of_range("char_energy: window outside grid");
    }
    a = std::max(a, Y0);
    b = std::min(b, Yend);
    // Partial end cells take the value of the nearest node inside the window,
    // so a window edge at a cell midpoint splits the trapezoid sum exactly.
    const auto first = static_cast<std::size_t>(std::ceil((a - Y0) / dY - 1e-9));
    const auto last = static_cast<std::size_t>(std::floor((b - Y0) / dY + 1e-9));
    if (last < first) {
        const auto i = static_cast<std::size_t>(std::llround(0.5 * (a + b - 2.0 * Y0) / dY));
        return (b - a) * f[std::min(i, n - 1)];
    }
    double sum = (Y0 + static_cast<double>(first) * dY - a) * f[first];
    for (std::size_t i = first; i < last; ++i) sum += 0.5 * dY * (f[i] + f[i + 1]);
    sum += (b - (Y0 + static_cast<double>(last) * dY)) * f[last];
    return sum;
}

WindowEnergy char_energy(const CharState& s, double Y1, double Y2) {
    const auto d = char_densities(s);
    return {window_integral(d.E, s.Y0, s.dY, Y1, Y2), window_integral(d.F, s.Y0, s.dY, Y1, Y2),
            window_integral(d.L, s.Y0, s.dY, Y1, Y2)};
}

WindowEnergy char_energy(const CharState& s) {
    const auto d = char_densities(s);
    return {integrate(d.E, s.dY), integrate(d.F, s.dY), integrate(d.L, s.dY)};
}

bool BoundReport::all_hold() const {
    return ux_L3.holds() && ux_L4.holds() && P1_sup.holds() && dxP1_sup.holds() && P2_sup.holds() &&
           dxP2_sup.holds() && P1_L2.holds() && dxP1_L2.holds() && P2_L2.holds() && dxP2_L2.holds();
}

BoundReport apriori_bounds(const GridFunction& u) {
    BoundReport r;
    r.E = energy_E(u);
    r.F = energy_F(u);
    const double gap = 2.0 * r.E * r.E - r.F;
    if (gap < -1e-12 * std::max(1.0, r.E * r.E)) throw NumericalError("energy inconsistency");
    r.K = std::sqrt(3.0 * r.E * std::max(gap, 0.0));

    const auto ux = derivative(u.values, u.dx);
    std::vector<double> a3(ux.size()), a4(ux.size());
    for (std::size_t i = 0; i < ux.size(); ++i) {
        const double b = std::abs(ux[i]);
        a3[i] = b * b * b;
        a4[i] = a3[i] * b;
    }
    r.ux_L3 = {integrate(a3, u.dx), r.K};
    r.ux_L4 = {integrate(a4, u.dx), 3.0 * std::max(gap, 0.0)};

    const auto src = novikov_sources(u);
    const double e32 = std::pow(r.E, 1.5);
    const double rt2 = std::sqrt(2.0);
    r.P1_sup = {sup_norm(src.P1.values), 0.75 * e32};
    r.dxP1_sup = {sup_norm(src.dxP1.values), 0.75 * e32};
    r.P2_sup = {sup_norm(src.P2.values), 0.25 * r.K};
    r.dxP2_sup = {sup_norm(src.dxP2.values), 0.25 * r.K};
    r.P1_L2 = {l2_norm(src.P1), 1.5 / rt2 * e32};
    r.dxP1_L2 = {l2_norm(src.dxP1), 1.5 / rt2 * e32};
    r.P2_L2 = {l2_norm(src.P2), r.K / (2.0 * rt2)};
    r.dxP2_L2 = {l2_norm(src.dxP2), r.K / (2.0 * rt2)};
    return r;
}

EnergyReport concentration_report(std::span<const CharState> traj,
                                   std::span<const SingularEvent> events,
                                   double Y1, double Y2, double F_scale) {
    if (events.empty()) throw NumericalError("no collision detected");
    if (traj.empty()) throw std::invalid_argument("concentration_report: empty trajectory");
    const double t_star = events.front().t;
    std::size_t k = 0;
    for (std::size_t j = 1; j < traj.size(); ++j) {
        if (std::abs(traj[j].t - t_star) < std::abs(traj[k].t - t_star)) k = j;
    }
    const CharState& s = traj[k];
    const auto total = char_energy(s);
    const auto win = char_energy(s, Y1, Y2);

    EnergyReport r;
    r.t = s.t;
    r.slice = k;
    r.E_total = total.E;
    r.F_total = total.F;
    r.window = EnergyReport::Window{Y1, Y2, win.E, win.F, win.L};
    r.E_vanishes = win.E < kEVanishFraction * total.E;
    r.L_positive = win.L > kLPositiveFraction * F_scale;

    std::size_t before = 0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        if (traj[j].t < t_star) before = j;
    }
    r.ux4_total_before = char_energy(traj[before]).L;
    r.ux4_outside_at_event = total.L - win.L;
    return r;
}

} // namespace novikov
