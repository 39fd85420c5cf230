#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbm/grid.hpp"

using namespace hbm;

TEST_CASE("log grid nodes and endpoints") {
    RadialGrid g = make_log_grid(1e-3, 1.0, 200);
    CHECK(g.size() == 200);
    CHECK(g.nodes.front() == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(g.nodes.back() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
    // Geometric spacing: constant ratio.
    const double q = g.nodes[1] / g.nodes[0];
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        CHECK(g.nodes[i + 1] / g.nodes[i] == doctest::Approx(q).epsilon(1e-12));
}

TEST_CASE("quadrature against r dr") {
    RadialGrid g = make_log_grid(1e-3, 1.0, 4000);
    std::vector<double> one(g.size(), 1.0);
    // int_a^b r dr = (b^2 - a^2)/2
    CHECK(g.quadrature(one) == doctest::Approx(0.5 * (1.0 - 1e-6)).epsilon(1e-6));
    std::vector<double> rr(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rr[i] = g.nodes[i] * g.nodes[i];
    // int r^3 dr = (b^4 - a^4)/4
    CHECK(g.quadrature(rr) == doctest::Approx(0.25).epsilon(1e-6));

    RadialGrid u = make_uniform_grid(0.1, 1.0, 4000);
    std::vector<double> uone(u.size(), 1.0);
    CHECK(u.quadrature(uone) == doctest::Approx(0.5 * (1.0 - 0.01)).epsilon(1e-6));
}

TEST_CASE("fourth-order derivative on polynomials") {
    RadialGrid g = make_log_grid(1e-2, 1.0, 600);
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = std::pow(g.nodes[i], 3);
    auto d = differentiate4(g, p);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(d[i] == doctest::Approx(3.0 * g.nodes[i] * g.nodes[i]).epsilon(1e-7));
}

TEST_CASE("stencil reproduces differentiate4") {
    RadialGrid g = make_log_grid(1e-3, 1.0, 300);
    std::vector<cplx> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        p[i] = cplx(std::sin(3.0 * g.nodes[i]), std::cos(2.0 * g.nodes[i]));
    auto d = differentiate4(g, p);
    DerivStencil st = deriv4_stencil(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < st.cols[i].size(); ++k)
            acc += st.coef[i][k] * p[static_cast<std::size_t>(st.cols[i][k])];
        CHECK(std::abs(acc - d[i]) < 1e-11 * (1.0 + std::abs(d[i])));
    }
}
