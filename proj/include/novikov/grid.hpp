#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace novikov {

/**
 * Uniformly sampled real function on a truncated line [x0, x0 + (n-1) dx].
 *
 * Values outside the support are taken to be zero. All integrals and
 * interpolations in the library follow that convention.
 */
struct GridFunction {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values;

    static constexpr std::size_t kMinSamples = 8;

    std::size_t size() const { return values.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_end() const { return x(size() - 1); }

    // Throws std::invalid_argument on bad geometry and NumericalError
    // ("non-finite input") on NaN/Inf samples.
    void validate() const;

    // Same geometry, new values.
    GridFunction with_values(std::vector<double> v) const;

    // Symmetric grid [-half_width, half_width] with n nodes, filled with f.
    static GridFunction sample(double half_width, std::size_t n,
                               const std::function<double(double)>& f);
    static GridFunction zeros(double half_width, std::size_t n);
};

enum class KernelMode { symmetric, antisymmetric };

double trapezoid_integral(const GridFunction& f);
double trapezoid_integral(std::span<const double> f, double h);

/**
 * Convolution with the kernel 1/2 e^{-|x-y|}.
 *
 * symmetric:      g(x) = 1/2 int e^{-|x-y|} f(y) dy
 * antisymmetric:  g(x) = 1/2 (int_x^inf - int_-inf^x) e^{-|x-y|} f(y) dy
 *
 * The antisymmetric output is the x-derivative of the symmetric one.
 * Evaluated in O(n) with trapezoid weights.
 */
GridFunction exp_convolution(const GridFunction& f, KernelMode mode);

// Linear interpolation inside the support, zero outside.
double sample_linear(const GridFunction& f, double x);

// Second-order centered differences, one-sided second order at the ends.
GridFunction derivative(const GridFunction& f);
GridFunction second_derivative(const GridFunction& f);

std::vector<double> derivative(std::span<const double> f, double h);
std::vector<double> second_derivative(std::span<const double> f, double h);

/// Trapezoid weights for n nodes of spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

/**
 * Weights q_i with sum_i q_i f_i = int f_h(x) e^{-|x|} dx, where f_h is the
 * piecewise-linear interpolant of the samples. The weight is integrated in
 * closed form, so constants are integrated exactly over the support.
 */
std::vector<double> exp_weight_quadrature(const GridFunction& grid);

/// Cumulative trapezoid integral, out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

/**
 * Two-sided exponential sums over a non-decreasing coordinate c:
 *
 *   forward[i]  = sum_{j<=i} e^{-(c_i - c_j)} m_j
 *   backward[i] = sum_{j>=i} e^{-(c_j - c_i)} m_j
 *
 * Both built by first-order recursions, so the cost is O(n). The kernel
 * sums of the nonlocal sources are combinations of these two arrays.
 */
struct ExpSums {
    std::vector<double> forward;
    std::vector<double> backward;
};
ExpSums exp_kernel_sums(std::span<const double> c, std::span<const double> mass);

// 1/2 sum_j e^{-|c_i-c_j|} m_j and 1/2 sum_j sgn(j-i) e^{-|c_i-c_j|} m_j.
void exp_kernel_apply(std::span<const double> c, std::span<const double> mass,
                      std::vector<double>& symmetric,
                      std::vector<double>& antisymmetric);

double sup_norm(std::span<const double> a);
double sup_distance(std::span<const double> a, std::span<const double> b);

} // namespace novikov
