#include "hbm/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hbm {

namespace {

void check_bounds(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min))
        throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
    if (n < 2) throw std::invalid_argument("RadialGrid: need n >= 2");
}

// Trapezoidal weights c_i = h (interior), h/2 (ends).
std::vector<double> trapezoid(std::size_t n, double h) {
    std::vector<double> c(n, h);
    c.front() = 0.5 * h;
    c.back() = 0.5 * h;
    return c;
}

}  // namespace

double RadialGrid::step() const {
    if (layout == GridLayout::Logarithmic)
        return std::log(r_max / r_min) / static_cast<double>(nodes.size() - 1);
    return (r_max - r_min) / static_cast<double>(nodes.size() - 1);
}

double RadialGrid::quadrature(const std::vector<double>& g) const {
    if (g.size() != nodes.size())
        throw std::invalid_argument("quadrature: profile length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += weights[i] * g[i];
    return s;
}

cplx RadialGrid::quadrature(const std::vector<cplx>& g) const {
    if (g.size() != nodes.size())
        throw std::invalid_argument("quadrature: profile length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += weights[i] * g[i];
    return s;
}

RadialGrid make_log_grid(double r_min, double r_max, std::size_t n) {
    check_bounds(r_min, r_max, n);
    RadialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.layout = GridLayout::Logarithmic;
    g.nodes.resize(n);
    const double x0 = std::log(r_min), x1 = std::log(r_max);
    const double h = (x1 - x0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = std::exp(x0 + h * static_cast<double>(i));
    g.nodes.front() = r_min;
    g.nodes.back() = r_max;
    // int g(r) r dr = int g(r(x)) r(x)^2 dx with x = log r.
    g.weights = trapezoid(n, h);
    for (std::size_t i = 0; i < n; ++i) g.weights[i] *= g.nodes[i] * g.nodes[i];
    return g;
}

RadialGrid make_uniform_grid(double r_min, double r_max, std::size_t n) {
    check_bounds(r_min, r_max, n);
    RadialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.layout = GridLayout::Uniform;
    g.nodes.resize(n);
    const double h = (r_max - r_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = r_min + h * static_cast<double>(i);
    g.nodes.back() = r_max;
    g.weights = trapezoid(n, h);
    for (std::size_t i = 0; i < n; ++i) g.weights[i] *= g.nodes[i];
    return g;
}

namespace {

// d/dx on the uniform coordinate, then chain rule to d/dr.
template <typename T>
std::vector<T> diff2_impl(const RadialGrid& g, const std::vector<T>& p) {
    const std::size_t n = g.size();
    if (p.size() != n) throw std::invalid_argument("differentiate: length mismatch");
    const double h = g.step();
    std::vector<T> d(n);
    if (n < 3) {
        const T slope = (p[n - 1] - p[0]) / h;
        d.assign(n, slope);
    } else {
        d[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (p[i + 1] - p[i - 1]) / (2.0 * h);
        d[n - 1] = (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * h);
    }
    if (g.layout == GridLayout::Logarithmic)
        for (std::size_t i = 0; i < n; ++i) d[i] /= g.nodes[i];
    return d;
}

// Five-point fourth-order coefficients relative to node offsets.
// Interior: offsets {-2,-1,0,1,2}, coefficients {1,-8,0,8,-1}/12h.
// First two / last two rows use one-sided five-point stencils.
const double c_interior[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
const double c_edge0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
const double c_edge1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};

template <typename T>
std::vector<T> diff4_impl(const RadialGrid& g, const std::vector<T>& p) {
    const std::size_t n = g.size();
    if (p.size() != n) throw std::invalid_argument("differentiate4: length mismatch");
    if (n < 5) return diff2_impl(g, p);
    const double h = g.step();
    std::vector<T> d(n);
    auto dot = [&](const double* c, std::size_t base) {
        T s = c[0] * p[base];
        for (int k = 1; k < 5; ++k) s += c[k] * p[base + static_cast<std::size_t>(k)];
        return s / h;
    };
    d[0] = dot(c_edge0, 0);
    d[1] = dot(c_edge1, 0);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = dot(c_interior, i - 2);
    // Mirror the one-sided stencils (negated, reversed) for the right edge.
    {
        double cm[5];
        for (int k = 0; k < 5; ++k) cm[k] = -c_edge1[4 - k];
        d[n - 2] = dot(cm, n - 5);
        for (int k = 0; k < 5; ++k) cm[k] = -c_edge0[4 - k];
        d[n - 1] = dot(cm, n - 5);
    }
    if (g.layout == GridLayout::Logarithmic)
        for (std::size_t i = 0; i < n; ++i) d[i] /= g.nodes[i];
    return d;
}

}  // namespace

std::vector<double> differentiate(const RadialGrid& g, const std::vector<double>& p) {
    return diff2_impl(g, p);
}
std::vector<cplx> differentiate(const RadialGrid& g, const std::vector<cplx>& p) {
    return diff2_impl(g, p);
}
std::vector<double> differentiate4(const RadialGrid& g, const std::vector<double>& p) {
    return diff4_impl(g, p);
}
std::vector<cplx> differentiate4(const RadialGrid& g, const std::vector<cplx>& p) {
    return diff4_impl(g, p);
}

DerivStencil deriv4_stencil(const RadialGrid& g) {
    const std::size_t n = g.size();
    const double h = g.step();
    DerivStencil st;
    st.cols.resize(n);
    st.coef.resize(n);
    auto row = [&](std::size_t i, const double* c, std::size_t base) {
        for (int k = 0; k < 5; ++k) {
            if (c[k] == 0.0) continue;
            st.cols[i].push_back(static_cast<int>(base) + k);
            double v = c[k] / h;
            if (g.layout == GridLayout::Logarithmic) v /= g.nodes[i];
            st.coef[i].push_back(v);
        }
    };
    if (n < 5) throw std::invalid_argument("deriv4_stencil: need n >= 5");
    row(0, c_edge0, 0);
    row(1, c_edge1, 0);
    for (std::size_t i = 2; i + 2 < n; ++i) row(i, c_interior, i - 2);
    double cm[5];
    for (int k = 0; k < 5; ++k) cm[k] = -c_edge1[4 - k];
    row(n - 2, cm, n - 5);
    for (int k = 0; k < 5; ++k) cm[k] = -c_edge0[4 - k];
    row(n - 1, cm, n - 5);
    return st;
}

}  // namespace hbm
