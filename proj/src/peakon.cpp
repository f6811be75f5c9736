#include "novikov/peakon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace novikov {

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

bool finite_state(const PeakonState& s) {
    return std::all_of(s.p.begin(), s.p.end(), [](double v) { return std::isfinite(v); }) &&
           std::all_of(s.q.begin(), s.q.end(), [](double v) { return std::isfinite(v); });
}

double min_spacing(const PeakonState& s) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.q.size(); ++i) m = std::min(m, s.q[i] - s.q[i - 1]);
    return m;
}

PeakonState axpy(const PeakonState& s, const PeakonRates& k, double h) {
    PeakonState out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.p[i] += h * k.dp[i];
        out.q[i] += h * k.dq[i];
    }
    out.t += h;
    return out;
}

} // namespace

void PeakonState::validate() const {
    if (p.empty() || p.size() != q.size()) {
        throw std::invalid_argument("peakon state: need |p| == |q| >= 1");
    }
    if (!finite_state(*this) || !std::isfinite(t)) throw NumericalError("non-finite input");
    for (std::size_t i = 1; i < q.size(); ++i) {
        if (!(q[i] > q[i - 1])) throw std::invalid_argument("peakon state: q must be strictly increasing");
    }
}

PeakonRates peakon_rhs(const PeakonState& s) {
    const std::size_t n = s.size();
    PeakonRates r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        // The double sum factorises: sum_jk a_j a_k = (sum_j a_j)^2 with
        // a_j = p_j e^{-|q_i-q_j|}, and the sgn-weighted one into
        // (sum_j sgn_j a_j)(sum_k a_k).
        double a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = s.q[i] - s.q[j];
            const double aj = s.p[j] * std::exp(-std::abs(d));
            a += aj;
            b += sgn(d) * aj;
        }
        r.dq[i] = a * a;
        r.dp[i] = s.p[i] * b * a;
    }
    return r;
}

PeakonTrajectory integrate_peakons(const PeakonState& s0, double t_end, double dt) {
    s0.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_peakons: dt must be positive");
    if (!(t_end > s0.t)) throw std::invalid_argument("integrate_peakons: t_end must exceed s0.t");

    PeakonTrajectory traj;
    traj.frames.push_back(s0);
    const auto steps = static_cast<long>(std::ceil((t_end - s0.t) / dt - 1e-9));
    PeakonState s = s0;
    for (long k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_end - s.t);
        const auto k1 = peakon_rhs(s);
        const auto k2 = peakon_rhs(axpy(s, k1, 0.5 * h));
        const auto k3 = peakon_rhs(axpy(s, k2, 0.5 * h));
        const auto k4 = peakon_rhs(axpy(s, k3, h));
        PeakonState next = s;
        for (std::size_t i = 0; i < s.size(); ++i) {
            next.p[i] += h / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
            next.q[i] += h / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
        }
        next.t = s0.t + static_cast<double>(k + 1) * dt;
        if (k + 1 == steps) next.t = t_end;
        if (!finite_state(next)) throw PeakonBlowup(std::move(traj));
        traj.frames.push_back(next);
        s = std::move(next);
        if (s.size() > 1 && min_spacing(s) < traj.min_spacing_limit) {
            traj.halt = PeakonHalt::spacing_collapse;
            break;
        }
        if (std::any_of(s.p.begin(), s.p.end(),
                        [&](double v) { return std::abs(v) > traj.amplitude_limit; })) {
            traj.halt = PeakonHalt::amplitude_blowup;
            break;
        }
    }
    return traj;
}

GridFunction peakon_field(const PeakonState& s, const GridFunction& grid) {
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid.x(k);
        for (std::size_t i = 0; i < s.size(); ++i) v[k] += s.p[i] * std::exp(-std::abs(x - s.q[i]));
    }
    return grid.with_values(std::move(v));
}

GridFunction peakon_slope(const PeakonState& s, const GridFunction& grid) {
    std::vector<double> v(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid.x(k);
        for (std::size_t i = 0; i < s.size(); ++i) {
            v[k] -= s.p[i] * sgn(x - s.q[i]) * std::exp(-std::abs(x - s.q[i]));
        }
    }
    return grid.with_values(std::move(v));
}

InitialProfile peakon_profile(const PeakonState& s) {
    InitialProfile prof;
    prof.u = [p = s.p, q = s.q](double x) {
        double v = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) v += p[i] * std::exp(-std::abs(x - q[i]));
        return v;
    };
    prof.ux = [p = s.p, q = s.q](double x) {
        double v = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) v -= p[i] * sgn(x - q[i]) * std::exp(-std::abs(x - q[i]));
        return v;
    };
    prof.kinks = s.q;
    return prof;
}

double peakon_energy(const PeakonState& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            e += s.p[i] * s.p[j] * std::exp(-std::abs(s.q[i] - s.q[j]));
        }
    }
    return 2.0 * e;
}

std::optional<Crossing> detect_crossing(const PeakonTrajectory& traj) {
    if (traj.halt != PeakonHalt::spacing_collapse || traj.frames.size() < 2) return std::nullopt;
    const auto& a = traj.frames[traj.frames.size() - 2];
    const auto& b = traj.frames.back();
    std::size_t pair = 1;
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b.q[i] - b.q[i - 1] < b.q[pair] - b.q[pair - 1]) pair = i;
    }
    const double da = a.q[pair] - a.q[pair - 1];
    const double db = b.q[pair] - b.q[pair - 1];
    const double h = b.t - a.t;
    const double mid_a = 0.5 * (a.q[pair] + a.q[pair - 1]);
    const double mid_b = 0.5 * (b.q[pair] + b.q[pair - 1]);
    double tau = 0.0;
    if (da > db) tau = db * h / (da - db);
    return Crossing{b.t + tau, mid_b + (mid_b - mid_a) / h * tau};
}

} // namespace novikov
