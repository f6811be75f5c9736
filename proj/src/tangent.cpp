#include "novikov/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "novikov/error.hpp"
#include "novikov/smooth.hpp"

namespace novikov {

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* who) {
    a.validate();
    b.validate();
    if (a.size() != b.size() || a.x0 != b.x0 || a.dx != b.dx) {
        throw std::invalid_argument(std::string(who) + ": grids differ");
    }
}

// Integral of f against the weight: exact product weights for e^{-|x|}, trapezoid otherwise.
class WeightedIntegral {
public:
    WeightedIntegral(const GridFunction& u, Weight weight) : h_(u.dx) {
        if (weight == Weight::exponential) q_ = exp_weight_quadrature(u);
    }
    double operator()(std::span<const double> f) const {
        if (q_.empty()) return trapezoid_integral(f, h_);
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) s += q_[i] * f[i];
        return s;
    }

private:
    double h_;
    std::vector<double> q_;
};

void check_finite(std::span<const double> a) {
    for (double x : a) {
        if (!std::isfinite(x)) throw NumericalError("non-finite input");
    }
}

TangentFrame axpy(const TangentFrame& base, const TangentFrame& k, double a) {
    TangentFrame out = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.v[i] += a * k.v[i];
        out.vx[i] += a * k.vx[i];
        out.w[i] += a * k.w[i];
        out.wx[i] += a * k.wx[i];
    }
    return out;
}

GridFunction lerp(const GridFunction& a, const GridFunction& b, double theta) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = (1.0 - theta) * a.values[i] + theta * b.values[i];
    return a.with_values(std::move(v));
}

} // namespace

void TangentFrame::validate(std::size_t n) const {
    if (v.size() != n || vx.size() != n || w.size() != n || wx.size() != n) {
        throw std::invalid_argument("TangentFrame: field lengths do not match the grid");
    }
    check_finite(v);
    check_finite(vx);
    check_finite(w);
    check_finite(wx);
}

TangentFrame TangentFrame::zero(std::size_t n) {
    const std::vector<double> z(n, 0.0);
    return {z, z, z, z};
}

TangentFrame TangentFrame::from_fields(std::vector<double> v, std::vector<double> w, double dx) {
    auto vx = derivative(v, dx);
    auto wx = derivative(w, dx);
    return {std::move(v), std::move(vx), std::move(w), std::move(wx)};
}

CostBreakdown finsler_cost(const GridFunction& u, const TangentFrame& tf, Weight weight) {
    u.validate();
    tf.validate(u.size());
    const std::size_t n = u.size();
    const auto ux = derivative(u.values, u.dx);
    const auto uxx = second_derivative(u.values, u.dx);
    std::vector<double> d1(n), d2(n), d3(n), d4(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double b = ux[i];
        const double a = 1.0 + b * b;
        const double slope = tf.vx[i] + uxx[i] * tf.w[i];
        d1[i] = std::abs(tf.w[i]) * a * a;
        d2[i] = std::abs(tf.v[i] + b * tf.w[i]) * a * a;
        d3[i] = std::abs(slope) * a;
        d4[i] = std::abs(4.0 * (b + b * b * b) * slope + a * a * tf.wx[i]);
    }
    const WeightedIntegral integral(u, weight);
    CostBreakdown c;
    c.I1 = integral(d1);
    c.I2 = integral(d2);
    c.I3 = integral(d3);
    c.I4 = integral(d4);
    c.total = c.I1 + c.I2 + c.I3 + c.I4;
    return c;
}

ShiftCandidate zero_shift() {
    return [](const GridFunction& u, const TangentFrame&) {
        return Shift{std::vector<double>(u.size(), 0.0), std::vector<double>(u.size(), 0.0)};
    };
}

ShiftCandidate own_shift() {
    return [](const GridFunction&, const TangentFrame& tf) { return Shift{tf.w, tf.wx}; };
}

ShiftCandidate matched_translation_shift() {
    return [](const GridFunction& u, const TangentFrame& tf) {
        const auto ux = derivative(u.values, u.dx);
        std::vector<double> num(u.size()), den(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            num[i] = tf.v[i] * ux[i];
            den[i] = ux[i] * ux[i];
        }
        const double d = trapezoid_integral(den, u.dx);
        const double h = d > 0.0 ? -trapezoid_integral(num, u.dx) / d : 0.0;
        return Shift{std::vector<double>(u.size(), h), std::vector<double>(u.size(), 0.0)};
    };
}

std::vector<ShiftCandidate> default_shift_candidates() {
    return {zero_shift(), own_shift(), matched_translation_shift()};
}

NormEstimate norm_upper(const GridFunction& u, const TangentFrame& tf,
                        std::span<const ShiftCandidate> candidates, const CostFunction& cost) {
    if (candidates.empty()) throw std::invalid_argument("norm_upper: empty candidate set");
    NormEstimate best;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        Shift s = candidates[k](u, tf);
        const TangentFrame f{tf.v, tf.vx, std::move(s.w), std::move(s.wx)};
        const CostBreakdown c = cost(u, f);
        if (k == 0 || c.total < best.value) best = {c.total, k, c};
    }
    return best;
}

double finsler_norm_upper(const GridFunction& u, const TangentFrame& tf,
                          std::span<const ShiftCandidate> candidates, Weight weight) {
    const CostFunction cost = [weight](const GridFunction& g, const TangentFrame& f) {
        return finsler_cost(g, f, weight);
    };
    return norm_upper(u, tf, candidates, cost).value;
}

double finsler_norm_upper(const GridFunction& u, const TangentFrame& tf) {
    const auto c = default_shift_candidates();
    return finsler_norm_upper(u, tf, c);
}

std::vector<TangentFrame> evolve_linear_tangent(std::span<const GridFunction> u_traj, double dt,
                                                const TangentFrame& tf0,
                                                const TangentDynamics& dyn) {
    if (u_traj.empty()) throw std::invalid_argument("evolve_tangent: empty trajectory");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_tangent: dt must be positive");
    tf0.validate(u_traj.front().size());
    std::vector<TangentFrame> out{tf0};
    out.reserve(u_traj.size());
    TangentFrame cur = tf0;
    for (std::size_t k = 0; k + 1 < u_traj.size(); ++k) {
        const GridFunction& a = u_traj[k];
        const GridFunction& b = u_traj[k + 1];
        require_same_grid(a, b, "evolve_tangent");
        const double limit = std::min(dyn.step_limit(a), dyn.step_limit(b));
        const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt / limit)));
        const double h = dt / static_cast<double>(m);
        const double dm = static_cast<double>(m);
        for (std::size_t s = 0; s < m; ++s) {
            const double th = static_cast<double>(s) / dm;
            const GridFunction u0 = lerp(a, b, th);
            const GridFunction uh = lerp(a, b, th + 0.5 / dm);
            const GridFunction u1 = lerp(a, b, th + 1.0 / dm);
            const auto k1 = dyn.rhs(u0, cur);
            const auto k2 = dyn.rhs(uh, axpy(cur, k1, 0.5 * h));
            const auto k3 = dyn.rhs(uh, axpy(cur, k2, 0.5 * h));
            const auto k4 = dyn.rhs(u1, axpy(cur, k3, h));
            for (std::size_t i = 0; i < cur.size(); ++i) {
                cur.v[i] += h / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
                cur.vx[i] += h / 6.0 * (k1.vx[i] + 2.0 * k2.vx[i] + 2.0 * k3.vx[i] + k4.vx[i]);
                cur.w[i] += h / 6.0 * (k1.w[i] + 2.0 * k2.w[i] + 2.0 * k3.w[i] + k4.w[i]);
                cur.wx[i] += h / 6.0 * (k1.wx[i] + 2.0 * k2.wx[i] + 2.0 * k3.wx[i] + k4.wx[i]);
            }
        }
        cur.validate(a.size());
        out.push_back(cur);
    }
    return out;
}

TangentFrame tangent_rhs(const GridFunction& u, const TangentFrame& tf) {
    const std::size_t n = u.size();
    const auto ux = derivative(u.values, u.dx);
    if (sup_norm(ux) > kSlopeGuard) throw NearBreakingError();
    const auto uxx = second_derivative(u.values, u.dx);
    const auto vxx = derivative(tf.vx, u.dx);
    const auto wxx = derivative(tf.wx, u.dx);

    std::vector<double> h1(n), h2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u.values[i], b = ux[i];
        h1[i] = 1.5 * b * b * tf.v[i] + 3.0 * a * b * tf.vx[i] + 3.0 * a * a * tf.v[i];
        h2[i] = b * b * tf.vx[i];
    }
    const auto g1 = u.with_values(std::move(h1));
    const auto g2 = u.with_values(std::move(h2));
    const auto S1 = exp_convolution(g1, KernelMode::symmetric);
    const auto A1 = exp_convolution(g1, KernelMode::antisymmetric);
    const auto S2 = exp_convolution(g2, KernelMode::symmetric);
    const auto A2 = exp_convolution(g2, KernelMode::antisymmetric);

    TangentFrame r = TangentFrame::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u.values[i], b = ux[i], c = uxx[i];
        const double v = tf.v[i], vx = tf.vx[i], w = tf.w[i], wx = tf.wx[i];
        r.v[i] = -a * a * vx - 2.0 * a * b * v - A1.values[i] - 1.5 * S2.values[i];
        r.vx[i] = -a * a * vxx[i] - a * b * vx - 0.5 * b * b * v - 2.0 * a * c * v + 3.0 * a * a * v -
                  S1.values[i] - 1.5 * A2.values[i];
        r.w[i] = -a * a * wx + 2.0 * a * (v + b * w);
        r.wx[i] = -a * a * wxx[i] + 2.0 * b * (v + b * w) + 2.0 * a * (vx + c * w);
    }
    return r;
}

std::vector<TangentFrame> evolve_tangent(std::span<const GridFunction> u_traj, double dt,
                                         const TangentFrame& tf0) {
    return evolve_linear_tangent(u_traj, dt, tf0, {tangent_rhs, smooth_step_limit});
}

GrowthReport growth_report(std::span<const double> times, std::span<const GridFunction> u_traj,
                           std::span<const TangentFrame> tf_traj, const NormFunction& norm) {
    if (times.size() != u_traj.size() || times.size() != tf_traj.size()) {
        throw std::invalid_argument("growth_report: trajectories not aligned");
    }
    GrowthReport r;
    r.times.assign(times.begin(), times.end());
    for (std::size_t k = 0; k < times.size(); ++k) r.norms.push_back(norm(u_traj[k], tf_traj[k]));
    if (r.norms.empty() || !(r.norms.front() > 0.0)) return r;
    const double n0 = r.norms.front();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < r.norms.size(); ++k) {
        const double ratio = r.norms[k] / n0;
        r.max_ratio = std::max(r.max_ratio, ratio);
        const double dt = r.times[k] - r.times.front();
        sxy += dt * std::log(std::max(ratio, 1e-300));
        sxx += dt * dt;
    }
    r.fitted_rate = sxx > 0.0 ? sxy / sxx : 0.0;
    return r;
}

GrowthReport verify_growth(std::span<const double> times, std::span<const GridFunction> u_traj,
                           std::span<const TangentFrame> tf_traj) {
    const auto candidates = default_shift_candidates();
    return growth_report(times, u_traj, tf_traj, [&](const GridFunction& u, const TangentFrame& tf) {
        return finsler_norm_upper(u, tf, candidates);
    });
}

double path_length(std::span<const GridFunction> path, std::span<const ShiftCandidate> candidates,
                   Weight weight) {
    const std::size_t m = path.size();
    if (m < 3) throw std::invalid_argument("path_length: need at least 3 theta samples");
    for (std::size_t k = 1; k < m; ++k) require_same_grid(path[0], path[k], "path_length");
    const std::size_t n = path[0].size();
    const double dth = 1.0 / static_cast<double>(m - 1);
    std::vector<double> norms(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (k == 0) {
                v[i] = (-3.0 * path[0].values[i] + 4.0 * path[1].values[i] - path[2].values[i]) / (2.0 * dth);
            } else if (k == m - 1) {
                v[i] = (3.0 * path[k].values[i] - 4.0 * path[k - 1].values[i] + path[k - 2].values[i]) /
                       (2.0 * dth);
            } else {
                v[i] = (path[k + 1].values[i] - path[k - 1].values[i]) / (2.0 * dth);
            }
        }
        const auto tf = TangentFrame::from_fields(std::move(v), std::vector<double>(n, 0.0), path[0].dx);
        norms[k] = finsler_norm_upper(path[k], tf, candidates, weight);
    }
    return trapezoid_integral(norms, dth);
}

double path_length(std::span<const GridFunction> path, Weight weight) {
    const auto c = default_shift_candidates();
    return path_length(path, c, weight);
}

double geodesic_upper_bound(const GridFunction& u, const GridFunction& u2, std::size_t n_theta,
                            Weight weight) {
    require_same_grid(u, u2, "geodesic_upper_bound");
    if (n_theta < 3) throw std::invalid_argument("geodesic_upper_bound: need at least 3 theta samples");
    std::vector<GridFunction> path;
    path.reserve(n_theta);
    for (std::size_t k = 0; k < n_theta; ++k) {
        path.push_back(lerp(u, u2, static_cast<double>(k) / static_cast<double>(n_theta - 1)));
    }
    const std::vector<ShiftCandidate> none{zero_shift()};
    return path_length(path, none, weight);
}

double sobolev_comparison(const GridFunction& u, const GridFunction& u2) {
    require_same_grid(u, u2, "sobolev_comparison");
    const std::size_t n = u.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = u.values[i] - u2.values[i];
    const auto dd = derivative(d, u.dx);
    std::vector<double> h1(n), l1(n), l1x(n), l4(n);
    for (std::size_t i = 0; i < n; ++i) {
        h1[i] = d[i] * d[i] + dd[i] * dd[i];
        l1[i] = std::abs(d[i]);
        l1x[i] = std::abs(dd[i]);
        l4[i] = dd[i] * dd[i] * dd[i] * dd[i];
    }
    const WeightedIntegral weighted(u, Weight::exponential);
    return std::sqrt(trapezoid_integral(h1, u.dx)) + weighted(l1) + weighted(l1x) +
           std::pow(trapezoid_integral(l4, u.dx), 0.25);
}

double weighted_L1_distance(const GridFunction& u, const GridFunction& u2) {
    require_same_grid(u, u2, "weighted_L1_distance");
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = std::abs(u.values[i] - u2.values[i]);
    return WeightedIntegral(u, Weight::exponential)(d);
}

double kr_discrepancy(const GridFunction& u, const GridFunction& u2, const GridFunction& f) {
    require_same_grid(u, u2, "kr_discrepancy");
    require_same_grid(u, f, "kr_discrepancy");
    constexpr double kTol = 1e-6;
    if (sup_norm(f.values) > 1.0 + kTol || sup_norm(derivative(f.values, f.dx)) > 1.0 + kTol) {
        throw std::invalid_argument("kr_discrepancy: test function must satisfy |f| <= 1 and |f'| <= 1");
    }
    const auto a = derivative(u.values, u.dx);
    const auto b = derivative(u2.values, u2.dx);
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double pa = 1.0 + a[i] * a[i], pb = 1.0 + b[i] * b[i];
        d[i] = f.values[i] * (pa * pa - pb * pb);
    }
    return std::abs(trapezoid_integral(d, u.dx));
}

void CharTangent::validate(const CharState& s) const {
    const std::size_t n = s.size();
    if (X.size() != n || U.size() != n || A.size() != n || zeta.size() != n) {
        throw std::invalid_argument("CharTangent: field lengths do not match the state");
    }
    check_finite(X);
    check_finite(U);
    check_finite(A);
    check_finite(zeta);
}

double char_cost(const CharState& s, const CharTangent& ct) {
    s.validate();
    ct.validate(s);
    const std::size_t n = s.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-std::abs(s.x[i]));
        const double xi = s.xi[i];
        d[i] = (std::abs(ct.X[i] * xi) + std::abs(ct.U[i] * xi) + 0.5 * std::abs(ct.A[i] * xi) +
                std::abs(ct.zeta[i])) * e;
    }
    return trapezoid_integral(d, s.dY);
}

CharTangent char_tangent_from_frame(const CharState& s, const GridFunction& u, const TangentFrame& tf) {
    s.validate();
    u.validate();
    tf.validate(u.size());
    const auto uxx = u.with_values(second_derivative(u.values, u.dx));
    const auto v = u.with_values(tf.v), vx = u.with_values(tf.vx);
    const auto w = u.with_values(tf.w), wx = u.with_values(tf.wx);
    const std::size_t n = s.size();
    CharTangent ct{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = s.x[i];
        const double half = 0.5 * s.alpha[i];
        const double c2 = std::cos(half) * std::cos(half);
        const double b = std::tan(half);
        const double a = 1.0 + b * b;
        const double wi = sample_linear(w, x);
        const double slope = sample_linear(vx, x) + sample_linear(uxx, x) * wi;
        ct.X[i] = wi;
        ct.U[i] = sample_linear(v, x) + b * wi;
        ct.A[i] = 2.0 * c2 * slope;
        ct.zeta[i] = s.xi[i] * c2 * c2 * (4.0 * (b + b * b * b) * slope + a * a * sample_linear(wx, x));
    }
    return ct;
}

} // namespace novikov
