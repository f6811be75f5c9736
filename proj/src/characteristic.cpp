#include "novikov/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novikov/error.hpp"

namespace novikov {

namespace {

double cos4_half(double a) {
    const double c = std::cos(0.5 * a);
    return c * c * c * c;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

} // namespace

void CharState::validate() const {
    const std::size_t n = u.size();
    if (x.size() != n || alpha.size() != n || xi.size() != n) {
        throw std::invalid_argument("char state: field lengths differ");
    }
    if (n < GridFunction::kMinSamples) throw std::invalid_argument("char state: at least 8 nodes required");
    if (!(dY > 0.0)) throw std::invalid_argument("char state: dY must be positive");
    if (!all_finite(x) || !all_finite(u) || !all_finite(alpha) || !all_finite(xi)) {
        throw NumericalError("non-finite input");
    }
    if (std::any_of(xi.begin(), xi.end(), [](double v) { return !(v > 0.0); })) {
        throw NumericalError("xi-positivity violated");
    }
}

GridFunction characteristic_labels(const GridFunction& u0_x) {
    u0_x.validate();
    std::vector<double> density(u0_x.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double s = 1.0 + u0_x.values[i] * u0_x.values[i];
        density[i] = s * s;
    }
    auto Y = cumulative_trapezoid(density, u0_x.dx);
    // Shift so that Y(0) = 0; x = 0 need not be a node.
    GridFunction labels = u0_x.with_values(Y);
    const double offset = (0.0 >= u0_x.x0 && 0.0 <= u0_x.x_end()) ? sample_linear(labels, 0.0)
                                                                  : Y.front();
    for (double& y : labels.values) y -= offset;
    return labels;
}

CharState to_characteristic(const GridFunction& u0) {
    return to_characteristic(u0, derivative(u0));
}

CharState to_characteristic(const GridFunction& u0, const GridFunction& u0_x) {
    u0.validate();
    if (u0_x.size() != u0.size() || u0_x.dx != u0.dx || u0_x.x0 != u0.x0) {
        throw std::invalid_argument("to_characteristic: slope grid mismatch");
    }
    const GridFunction labels = characteristic_labels(u0_x);
    const auto& Yx = labels.values;
    for (std::size_t i = 1; i < Yx.size(); ++i) {
        if (!(Yx[i] > Yx[i - 1])) throw NumericalError("characteristic labels not monotone");
    }

    const std::size_t n = u0.size();
    CharState s;
    s.t = 0.0;
    s.Y0 = Yx.front();
    s.dY = (Yx.back() - Yx.front()) / static_cast<double>(n - 1);
    s.x.resize(n);
    s.u.resize(n);
    s.alpha.resize(n);
    s.xi.assign(n, 1.0);

    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double Y = (i + 1 == n) ? Yx.back() : s.Y(i);
        while (j + 2 < n && Yx[j + 1] < Y) ++j;
        const double a = std::clamp((Y - Yx[j]) / (Yx[j + 1] - Yx[j]), 0.0, 1.0);
        const double x = u0.x(j) + a * u0.dx;
        s.x[i] = x;
        s.u[i] = (1.0 - a) * u0.values[j] + a * u0.values[j + 1];
        const double ux = (1.0 - a) * u0_x.values[j] + a * u0_x.values[j + 1];
        s.alpha[i] = 2.0 * std::atan(ux);
    }
    return s;
}

std::vector<double> relative_positions(const CharState& s) {
    std::vector<double> density(s.size());
    for (std::size_t i = 0; i < density.size(); ++i) density[i] = s.xi[i] * cos4_half(s.alpha[i]);
    auto c = cumulative_trapezoid(density, s.dY);
    const double ref = c[s.center()];
    for (double& v : c) v -= ref;
    return c;
}

std::vector<double> x_of_Y(const CharState& s) {
    auto c = relative_positions(s);
    const double anchor = s.x[s.center()];
    for (double& v : c) v += anchor;
    return c;
}

GridFunction graph_to_x(const CharState& s, const GridFunction& grid) {
    std::vector<double> out(grid.size(), 0.0);
    // Evolved positions may carry round-off level reorderings inside collapsed regions.
    std::vector<double> xs = s.x;
    for (std::size_t i = 1; i < xs.size(); ++i) xs[i] = std::max(xs[i], xs[i - 1]);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double X = grid.x(k);
        if (X < xs.front() || X > xs.back()) continue;
        auto it = std::lower_bound(xs.begin(), xs.end(), X);
        const auto j = static_cast<std::size_t>(it - xs.begin());
        if (j == 0 || *it == X) {
            out[k] = s.u[j];
            continue;
        }
        const double span = xs[j] - xs[j - 1];
        const double a = span > 0.0 ? (X - xs[j - 1]) / span : 1.0;
        out[k] = (1.0 - a) * s.u[j - 1] + a * s.u[j];
    }
    return grid.with_values(std::move(out));
}

} // namespace novikov

namespace novikov {

namespace {

// 5-point Gauss-Legendre on [a, b].
double gauss5(const std::function<double(double)>& f, double a, double b) {
    static constexpr double nodes[5] = {0.0, 0.5384693101056831, -0.5384693101056831,
                                        0.9061798459386640, -0.9061798459386640};
    static constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                          0.2369268850561891, 0.2369268850561891};
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += weights[k] * f(m + r * nodes[k]);
    return s * r;
}

// Cumulative labels on a breakpoint set that contains every kink, 0 and the grid nodes.
class LabelMap {
public:
    LabelMap(const InitialProfile& p, const LabelGrading& g, double lo, double hi, std::size_t cells)
        : p_(p), g_(g) {
        std::vector<double> b;
        const double h = (hi - lo) / static_cast<double>(cells);
        for (std::size_t i = 0; i <= cells; ++i) b.push_back(lo + static_cast<double>(i) * h);
        b.push_back(0.0);
        for (double k : p.kinks) {
            if (k > lo && k < hi) b.push_back(k);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        breaks_ = std::move(b);
        Y_.assign(breaks_.size(), 0.0);
        for (std::size_t i = 1; i < breaks_.size(); ++i) {
            Y_[i] = Y_[i - 1] + piece(breaks_[i - 1], breaks_[i]);
        }
        const auto zero = std::lower_bound(breaks_.begin(), breaks_.end(), 0.0) - breaks_.begin();
        const double y0 = Y_[static_cast<std::size_t>(zero)];
        for (double& y : Y_) y -= y0;
    }

    double label(double x) const {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - breaks_.begin())) - 1;
        j = std::min(j, breaks_.size() - 2);
        return Y_[j] + piece(breaks_[j], x);
    }

    double inverse(double Y) const {
        auto it = std::upper_bound(Y_.begin(), Y_.end(), Y);
        std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - Y_.begin())) - 1;
        j = std::min(j, breaks_.size() - 2);
        double a = breaks_[j], b = breaks_[j + 1];
        // The density is >= 1 and smooth inside a piece: safeguarded Newton.
        double x = a + (Y - Y_[j]) / std::max(1.0, (Y_[j + 1] - Y_[j]) / (b - a));
        x = std::clamp(x, a, b);
        for (int it2 = 0; it2 < 60; ++it2) {
            const double r = Y_[j] + piece(breaks_[j], x) - Y;
            if (std::abs(r) < 1e-14 * std::max(1.0, std::abs(Y))) break;
            if (r > 0.0) b = x; else a = x;
            double next = x - r / density(x, breaks_[j], breaks_[j + 1]);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            x = next;
        }
        return x;
    }

    double slope(double x) const { return p_.ux(x); }

    // Label density relative to (1 + u_x^2)^2.
    double grading(double x) const {
        if (g_.strength == 0.0) return 1.0;
        double w = 0.0;
        for (double k : p_.kinks) w += std::exp(-std::abs(x - k) / g_.width);
        return 1.0 + g_.strength * w;
    }

private:
    double density(double x, double a, double b) const {
        // Evaluate strictly inside the piece so a kink endpoint uses the right side.
        const double e = 1e-12 * (b - a);
        const double z = std::clamp(x, a + e, b - e);
        const double s = 1.0 + sq(p_.ux(z));
        return s * s * grading(z);
    }
    double piece(double a, double x) const {
        if (x == a) return 0.0;
        // Split at kinks strictly between a and x.
        double lo = std::min(a, x), hi = std::max(a, x);
        double total = 0.0, left = lo;
        for (double k : p_.kinks) {
            if (k > left && k < hi) {
                total += gauss5([&](double z) { return density(z, left, k); }, left, k);
                left = k;
            }
        }
        total += gauss5([&](double z) { return density(z, left, hi); }, left, hi);
        return x >= a ? total : -total;
    }
    static double sq(double v) { return v * v; }

    const InitialProfile& p_;
    LabelGrading g_;
    std::vector<double> breaks_;
    std::vector<double> Y_;
};

} // namespace

double profile_label(const InitialProfile& p, double x, const LabelGrading& grading) {
    const double span = std::max(1.0, 2.0 * std::abs(x));
    LabelMap map(p, grading, -span, span, 4096);
    return map.label(x);
}

CharState to_characteristic(const InitialProfile& p, double half_width, std::size_t n,
                            const LabelGrading& grading) {
    if (n < GridFunction::kMinSamples) throw std::invalid_argument("to_characteristic: at least 8 nodes required");
    if (!(half_width > 0.0)) throw std::invalid_argument("to_characteristic: half width must be positive");
    // Margin so that the stretched grid still maps into the tabulated range.
    const double margin = 0.1 * half_width + 1.0;
    LabelMap map(p, grading, -half_width - margin, half_width + margin, n + 2 * n / 10 + 2);

    const double Ylo = map.label(-half_width), Yhi = map.label(half_width);
    double dY = (Yhi - Ylo) / static_cast<double>(n - 1);
    double Y0 = Ylo;

    std::vector<double> kinks;
    for (double k : p.kinks) {
        if (k > -half_width && k < half_width) kinks.push_back(k);
    }
    std::sort(kinks.begin(), kinks.end());
    if (!kinks.empty()) {
        const double Ya = map.label(kinks.front());
        if (kinks.size() > 1) {
            const double Yb = map.label(kinks.back());
            const double cells = std::max(1.0, std::round((Yb - Ya) / dY));
            dY = (Yb - Ya) / cells;
        }
        const double k = std::round((Ya - Ylo) / dY - 0.5);
        Y0 = Ya - (k + 0.5) * dY;
    }

    CharState s;
    s.Y0 = Y0;
    s.dY = dY;
    s.x.resize(n);
    s.u.resize(n);
    s.alpha.resize(n);
    s.xi.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = map.inverse(s.Y(i));
        s.x[i] = x;
        s.u[i] = p.u(x);
        s.alpha[i] = 2.0 * std::atan(map.slope(x));
        s.xi[i] = 1.0 / map.grading(x);
    }
    return s;
}

} // namespace novikov
