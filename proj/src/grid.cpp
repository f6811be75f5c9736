#include "novikov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "novikov/error.hpp"

namespace novikov {

void GridFunction::validate() const {
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) {
        throw std::invalid_argument("grid: dx must be positive and finite");
    }
    if (values.size() < kMinSamples) {
        throw std::invalid_argument("grid: at least 8 samples required");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericalError("non-finite input");
    }
}

GridFunction GridFunction::with_values(std::vector<double> v) const {
    return GridFunction{x0, dx, std::move(v)};
}

GridFunction GridFunction::sample(double half_width, std::size_t n,
                                  const std::function<double(double)>& f) {
    if (n < 2) throw std::invalid_argument("grid: need n >= 2");
    GridFunction g{-half_width, 2.0 * half_width / static_cast<double>(n - 1), {}};
    g.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.values[i] = f(g.x(i));
    return g;
}

GridFunction GridFunction::zeros(double half_width, std::size_t n) {
    return sample(half_width, n, [](double) { return 0.0; });
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
    std::vector<double> w(n, h);
    if (n > 0) {
        w.front() = 0.5 * h;
        w.back() = 0.5 * h;
    }
    return w;
}

double trapezoid_integral(const GridFunction& f) {
    f.validate();
    return trapezoid_integral(f.values, f.dx);
}

double trapezoid_integral(std::span<const double> v, double h) {
    if (v.empty()) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * h;
}

namespace {

// int_c^d e^{-|x|} dx and int_c^d x e^{-|x|} dx for c <= d on one side of 0.
void exp_moments(double c, double d, double& m0, double& m1) {
    const double sigma = (c + d) >= 0.0 ? -1.0 : 1.0;
    const double ec = std::exp(sigma * c), ed = std::exp(sigma * d);
    m0 = (ed - ec) / sigma;
    m1 = (ed * (d / sigma - 1.0 / (sigma * sigma))) - (ec * (c / sigma - 1.0 / (sigma * sigma)));
}

} // namespace

std::vector<double> exp_weight_quadrature(const GridFunction& grid) {
    grid.validate();
    const std::size_t n = grid.size();
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = grid.x(i), b = grid.x(i + 1), h = grid.dx;
        double m0 = 0.0, m1 = 0.0;
        if (a < 0.0 && b > 0.0) {
            double l0, l1, r0, r1;
            exp_moments(a, 0.0, l0, l1);
            exp_moments(0.0, b, r0, r1);
            m0 = l0 + r0;
            m1 = l1 + r1;
        } else {
            exp_moments(a, b, m0, m1);
        }
        q[i] += (b * m0 - m1) / h;
        q[i + 1] += (m1 - a * m0) / h;
    }
    return q;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    }
    return out;
}

ExpSums exp_kernel_sums(std::span<const double> c, std::span<const double> mass) {
    const std::size_t n = c.size();
    ExpSums s{std::vector<double>(n), std::vector<double>(n)};
    if (n == 0) return s;
    s.forward[0] = mass[0];
    for (std::size_t i = 1; i < n; ++i) {
        s.forward[i] = std::exp(-(c[i] - c[i - 1])) * s.forward[i - 1] + mass[i];
    }
    s.backward[n - 1] = mass[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        s.backward[i] = std::exp(-(c[i + 1] - c[i])) * s.backward[i + 1] + mass[i];
    }
    return s;
}

void exp_kernel_apply(std::span<const double> c, std::span<const double> mass,
                      std::vector<double>& symmetric,
                      std::vector<double>& antisymmetric) {
    const auto sums = exp_kernel_sums(c, mass);
    const std::size_t n = c.size();
    symmetric.resize(n);
    antisymmetric.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        symmetric[i] = 0.5 * (sums.forward[i] + sums.backward[i] - mass[i]);
        antisymmetric[i] = 0.5 * (sums.backward[i] - sums.forward[i]);
    }
}

GridFunction exp_convolution(const GridFunction& f, KernelMode mode) {
    f.validate();
    const std::size_t n = f.size();
    std::vector<double> c(n), mass(n);
    const auto w = trapezoid_weights(n, f.dx);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = f.x(i);
        mass[i] = w[i] * f.values[i];
    }
    std::vector<double> sym, anti;
    exp_kernel_apply(c, mass, sym, anti);
    return f.with_values(mode == KernelMode::symmetric ? std::move(sym) : std::move(anti));
}

double sample_linear(const GridFunction& f, double x) {
    if (!(x >= f.x0) || !(x <= f.x_end())) return 0.0;
    const double s = (x - f.x0) / f.dx;
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= f.size() - 1) return f.values.back();
    const double a = s - static_cast<double>(i);
    if (a == 0.0) return f.values[i];
    return (1.0 - a) * f.values[i] + a * f.values[i + 1];
}

std::vector<double> derivative(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    if (n < 3) throw std::invalid_argument("derivative: need 3 samples");
    const double inv = 1.0 / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    return d;
}

std::vector<double> second_derivative(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    if (n < 4) throw std::invalid_argument("second_derivative: need 4 samples");
    const double inv = 1.0 / (h * h);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    return d;
}

GridFunction derivative(const GridFunction& f) {
    return f.with_values(derivative(f.values, f.dx));
}

GridFunction second_derivative(const GridFunction& f) {
    return f.with_values(second_derivative(f.values, f.dx));
}

double sup_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace novikov
