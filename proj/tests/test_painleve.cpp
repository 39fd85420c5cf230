#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbm/painleve.hpp"

using namespace hbm;

TEST_CASE("Macdonald function reference values") {
    CHECK(bessel_k0(1.0) == doctest::Approx(0.421024438240708).epsilon(1e-12));
    CHECK(bessel_k0(5.0) == doctest::Approx(0.003691098334042594).epsilon(1e-12));
    CHECK(bessel_k1(1.0) == doctest::Approx(0.6019072301972346).epsilon(1e-12));
    CHECK_THROWS(bessel_k0(0.0));
}

TEST_CASE("small-rho series recursion") {
    const double a0 = 0.9891821298588808;
    auto a = series_small_rho(4, a0);
    REQUIRE(a.size() == 5);
    CHECK(a[0] == a0);
    CHECK(a[1] == doctest::Approx(-9.0 / (64.0 * a0)).epsilon(1e-14));
    CHECK(a[1] / a[0] == doctest::Approx(-0.14371761832078539).epsilon(1e-10));
    // The series must satisfy the ODE near rho = 0: compare (rho psi')' via
    // finite differences of the series itself.
    const double rho = 1e-3, eps = 1e-6;
    double pm, wm, pp, wp, p0, w0;
    series_eval(a, rho - eps, &pm, &wm);
    series_eval(a, rho + eps, &pp, &wp);
    series_eval(a, rho, &p0, &w0);
    const double lhs = rho * (wp - wm) / (2.0 * eps);
    const double rhs = 0.5 * rho * rho * std::sinh(2.0 * p0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("connection constants of the distinguished solution") {
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    CHECK(sol.a_coeffs[0] == doctest::Approx(0.9891821298588808).epsilon(1e-9));
    // The envelope amplitude is 1/pi to the solver's matching accuracy.
    CHECK(sol.envelope_c == doctest::Approx(1.0 / M_PI).epsilon(1e-8));
    CHECK(sol.match_residual <= 1e-10);
    for (std::size_t i = 0; i < sol.psi.size(); ++i) {
        CHECK(sol.psi[i] > 0.0);
        if (i) CHECK(sol.psi[i] < sol.psi[i - 1]);
        CHECK(sol.psi_prime[i] < 0.0);
    }
}

TEST_CASE("eval_psi interpolation and continuations") {
    PainleveSolution sol = solve_painleve(1e-4, 12.0, 1600, 1e-10);
    // Grid nodes are reproduced.
    for (std::size_t i : {0ul, 1ul, 700ul, 1598ul, 1599ul}) {
        double p, pp;
        eval_psi(sol, sol.rho_grid.nodes[i], &p, &pp);
        CHECK(p == doctest::Approx(sol.psi[i]).epsilon(1e-10));
        CHECK(pp == doctest::Approx(sol.psi_prime[i]).epsilon(1e-8));
    }
    // Continuity across the series and envelope continuation boundaries.
    for (double rho0 : {1e-4, 12.0}) {
        double pl, pr;
        eval_psi(sol, rho0 * (1.0 - 1e-9), &pl, nullptr);
        eval_psi(sol, rho0 * (1.0 + 1e-9), &pr, nullptr);
        CHECK(pl == doctest::Approx(pr).epsilon(1e-5));
    }
    CHECK_THROWS(eval_psi(sol, 0.0, nullptr, nullptr));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS(solve_painleve(0.0, 12.0, 100, 1e-10));
    CHECK_THROWS(solve_painleve(1e-4, 5.0, 100, 1e-10));
    CHECK_THROWS(solve_painleve(1e-4, 12.0, 4, 1e-10));
    CHECK_THROWS(solve_painleve(1e-4, 12.0, 100, 1e-14));
}
