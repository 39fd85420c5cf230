#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hbm {

using cplx = std::complex<double>;

enum class GridLayout { Logarithmic, Uniform };

/// Radial grid on [r_min, r_max] with quadrature weights for the measure
/// r dr (the radial part of the area form r dr dtheta).
///
/// Immutable after construction; safe to share across threads.
struct RadialGrid {
    std::vector<double> nodes;    ///< strictly increasing, nodes.front()=r_min
    std::vector<double> weights;  ///< quadrature weights: sum w_i g(r_i) ~ int g r dr
    double r_min = 0.0;
    double r_max = 0.0;
    GridLayout layout = GridLayout::Logarithmic;

    std::size_t size() const { return nodes.size(); }

    /// Spacing of the underlying uniform coordinate (log r or r).
    double step() const;

    double quadrature(const std::vector<double>& g) const;
    cplx quadrature(const std::vector<cplx>& g) const;
};

/// Geometrically spaced nodes; trapezoidal weights in log r against r dr.
/// Requires 0 < r_min < r_max and n >= 2 (n >= 8 for any serious use).
RadialGrid make_log_grid(double r_min, double r_max, std::size_t n);

/// Equispaced nodes; trapezoidal weights in r against r dr.
RadialGrid make_uniform_grid(double r_min, double r_max, std::size_t n);

/// d/dr of a sampled profile: second-order centered stencil in the grid's
/// uniform coordinate, one-sided at the two endpoints.
std::vector<double> differentiate(const RadialGrid& g, const std::vector<double>& p);
std::vector<cplx> differentiate(const RadialGrid& g, const std::vector<cplx>& p);

/// d/dr with a fourth-order five-point stencil (one-sided near the ends).
/// Used internally by the field operators, where the extra accuracy matters.
std::vector<double> differentiate4(const RadialGrid& g, const std::vector<double>& p);
std::vector<cplx> differentiate4(const RadialGrid& g, const std::vector<cplx>& p);

/// Row-compressed form of the fourth-order d/dr stencil: for each node i,
/// column indices cols[i] and coefficients coef[i] with
/// (Dp)_i = sum_k coef[i][k] * p[cols[i][k]].  At most five entries per row,
/// all within distance four of the diagonal.
struct DerivStencil {
    std::vector<std::vector<int>> cols;
    std::vector<std::vector<double>> coef;
};
DerivStencil deriv4_stencil(const RadialGrid& g);

}  // namespace hbm
