#include "novikov/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace novikov {

namespace {

using std::numbers::pi;

void check_xi(const CharState& s) {
    for (double v : s.xi) {
        if (!(v > 0.0)) throw NumericalError("xi-positivity violated");
    }
}

CharState combine(const CharState& s, const CharRates& k, double h) {
    CharState out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.x[i] += h * k.x[i];
        out.u[i] += h * k.u[i];
        out.alpha[i] += h * k.alpha[i];
        out.xi[i] += h * k.xi[i];
    }
    out.t += h;
    return out;
}

double picard_change(const std::vector<CharState>& a, const std::vector<CharState>& b) {
    double r = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        r = std::max({r, sup_distance(a[k].u, b[k].u), sup_distance(a[k].alpha, b[k].alpha),
                      sup_distance(a[k].xi, b[k].xi)});
    }
    return r;
}

} // namespace

SourceTerms nonlocal_sources(const CharState& s) {
    check_xi(s);
    const std::size_t n = s.size();
    const auto c = relative_positions(s);
    std::vector<double> m1(n), m2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = s.alpha[i];
        const double ch = std::cos(0.5 * a), sh = std::sin(0.5 * a);
        const double c2 = ch * ch, s2 = sh * sh;
        const double sa = std::sin(a);
        const double u = s.u[i];
        m1[i] = (0.375 * u * sa * sa + u * u * u * c2 * c2) * s.xi[i];
        m2[i] = s.xi[i] * sa * s2;
    }
    const auto w = trapezoid_weights(n, s.dY);
    for (std::size_t i = 0; i < n; ++i) {
        m1[i] *= w[i];
        m2[i] *= w[i];
    }
    SourceTerms src;
    exp_kernel_apply(c, m1, src.P1, src.dxP1);
    exp_kernel_apply(c, m2, src.P2, src.dxP2);
    for (std::size_t i = 0; i < n; ++i) {
        src.P2[i] *= 0.25;
        src.dxP2[i] *= 0.25;
    }
    return src;
}

CharRates char_rhs(const CharState& s) { return char_rhs(s, nonlocal_sources(s)); }

CharRates char_rhs(const CharState& s, const SourceTerms& src) {
    const std::size_t n = s.size();
    CharRates r{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double u = s.u[i];
        const double a = s.alpha[i];
        const double ch = std::cos(0.5 * a), sh = std::sin(0.5 * a);
        const double c2 = ch * ch, s2 = sh * sh;
        const double q = src.P1[i] + src.dxP2[i];
        r.x[i] = u * u;
        r.u[i] = -src.dxP1[i] - src.P2[i];
        r.alpha[i] = -u * s2 + 2.0 * u * u * u * c2 - 2.0 * c2 * q;
        r.xi[i] = s.xi[i] * ((2.0 * u * u * u + u) - 2.0 * q) * std::sin(a);
    }
    return r;
}

CharState step_rk4(const CharState& s, double dt, StepDiagnostics* diag) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    const auto k1 = char_rhs(s);
    const auto k2 = char_rhs(combine(s, k1, 0.5 * dt));
    const auto k3 = char_rhs(combine(s, k2, 0.5 * dt));
    const auto k4 = char_rhs(combine(s, k3, dt));
    CharState out = s;
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.x[i] += h6 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        out.u[i] += h6 * (k1.u[i] + 2.0 * k2.u[i] + 2.0 * k3.u[i] + k4.u[i]);
        out.alpha[i] += h6 * (k1.alpha[i] + 2.0 * k2.alpha[i] + 2.0 * k3.alpha[i] + k4.alpha[i]);
        out.xi[i] += h6 * (k1.xi[i] + 2.0 * k2.xi[i] + 2.0 * k3.xi[i] + k4.xi[i]);
    }
    out.t = s.t + dt;
    check_xi(out);
    if (diag) {
        diag->x_drift = sup_distance(out.x, x_of_Y(out));
        diag->x_drift_warning = diag->x_drift > kXDriftTolerance;
    }
    return out;
}

CharRun evolve_rk4(const CharState& s0, const CharRunOptions& opt) {
    s0.validate();
    if (!(opt.dt > 0.0) || !(opt.t_end > s0.t)) {
        throw std::invalid_argument("evolve_rk4: need dt > 0 and t_end > t0");
    }
    const std::size_t every = std::max<std::size_t>(1, opt.store_every);
    const auto steps = static_cast<std::size_t>(std::ceil((opt.t_end - s0.t) / opt.dt - 1e-9));
    CharRun run;
    run.slices.push_back(s0);
    if (opt.observer) opt.observer(s0);
    CharState s = s0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_next = (k == steps) ? opt.t_end : s0.t + static_cast<double>(k) * opt.dt;
        StepDiagnostics d;
        s = step_rk4(s, t_next - s.t, &d);
        s.t = t_next;
        run.max_x_drift = std::max(run.max_x_drift, d.x_drift);
        if (d.x_drift_warning) ++run.drift_warnings;
        if (opt.observer) opt.observer(s);
        if (k % every == 0 || k == steps) run.slices.push_back(s);
    }
    return run;
}

PicardResult picard_solve(const CharState& s0, double t, const PicardOptions& opt) {
    s0.validate();
    if (!(t > 0.0)) throw std::invalid_argument("picard_solve: t must be positive");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
    if (opt.slices < 1) throw std::invalid_argument("picard_solve: need at least one slice");

    const std::size_t m = opt.slices;
    const std::size_t n = s0.size();
    const double h = t / static_cast<double>(m);
    std::vector<CharState> iterate(m + 1, s0);
    for (std::size_t k = 0; k <= m; ++k) iterate[k].t = s0.t + static_cast<double>(k) * h;

    PicardResult result;
    for (int it = 1; it <= opt.max_iter; ++it) {
        std::vector<CharRates> rates;
        rates.reserve(m + 1);
        for (const auto& slice : iterate) rates.push_back(char_rhs(slice));

        std::vector<CharState> next(m + 1, s0);
        for (std::size_t k = 0; k <= m; ++k) next[k].t = iterate[k].t;
        for (std::size_t k = 1; k <= m; ++k) {
            const auto& a = rates[k - 1];
            const auto& b = rates[k];
            auto& dst = next[k];
            const auto& prev = next[k - 1];
            for (std::size_t i = 0; i < n; ++i) {
                dst.x[i] = prev.x[i] + 0.5 * h * (a.x[i] + b.x[i]);
                dst.u[i] = prev.u[i] + 0.5 * h * (a.u[i] + b.u[i]);
                dst.alpha[i] = prev.alpha[i] + 0.5 * h * (a.alpha[i] + b.alpha[i]);
                dst.xi[i] = prev.xi[i] + 0.5 * h * (a.xi[i] + b.xi[i]);
            }
        }
        const double change = picard_change(iterate, next);
        result.residuals.push_back(change);
        iterate = std::move(next);
        if (change < opt.tol) {
            result.state = iterate.back();
            result.iterations = it;
            return result;
        }
        if (!std::isfinite(change)) break;
    }
    throw PicardStalled(result.residuals);
}

SingularityTracker::SingularityTracker(double eps) : eps_(eps) {}

void SingularityTracker::observe(const CharState& s) {
    const std::size_t n = s.size();
    if (!started_) {
        crossed_.assign(n, 0);
        touch_.assign(n, std::nullopt);
    } else if (n != prev_alpha_.size()) {
        throw std::invalid_argument("SingularityTracker: grid size changed");
    }
    // Index of the 2 pi band (2m-1) pi <= alpha < (2m+1) pi.
    auto band = [](double a) { return std::floor((a + pi) / (2.0 * pi)); };
    for (std::size_t i = 0; i < n; ++i) {
        const double a1 = s.alpha[i];
        if (started_ && !crossed_[i]) {
            const double a0 = prev_alpha_[i];
            const double b0 = band(a0), b1 = band(a1);
            if (b0 != b1) {
                const double level = (2.0 * std::max(b0, b1) - 1.0) * pi;
                const double frac = (level - a0) / (a1 - a0);
                crossings_.push_back({prev_t_ + frac * (s.t - prev_t_), s.Y(i), i, level, "crossing"});
                crossed_[i] = 1;
            }
        }
        if (!touch_[i]) {
            const double c = std::cos(0.5 * a1);
            if (c * c < eps_) {
                const double level = (2.0 * std::round((a1 - pi) / (2.0 * pi)) + 1.0) * pi;
                touch_[i] = SingularEvent{s.t, s.Y(i), i, level, "touch"};
            }
        }
    }
    prev_alpha_ = s.alpha;
    prev_t_ = s.t;
    started_ = true;
}

std::vector<SingularEvent> SingularityTracker::events() const {
    std::vector<SingularEvent> out = crossings_;
    for (std::size_t i = 0; i < touch_.size(); ++i) {
        if (!crossed_[i] && touch_[i]) out.push_back(*touch_[i]);
    }
    std::sort(out.begin(), out.end(), [](const SingularEvent& a, const SingularEvent& b) {
        return a.t != b.t ? a.t < b.t : a.node < b.node;
    });
    return out;
}

std::vector<SingularEvent> detect_singularity(std::span<const CharState> traj, double eps) {
    SingularityTracker tracker(eps);
    for (const auto& s : traj) tracker.observe(s);
    return tracker.events();
}

} // namespace novikov
