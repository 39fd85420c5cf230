#pragma once

#include <vector>

#include "hbm/grid.hpp"

namespace hbm {

/// The distinguished solution of (rho d_rho)^2 psi = (1/2) rho^2 sinh(2 psi):
/// psi ~ -log(rho^{1/3} sum_j a_j rho^{4j/3}) as rho -> 0 and
/// psi ~ c K0(rho) as rho -> infinity.  Sampled on a log grid in rho,
/// together with the connection data (a_j, c) determined by the solver.
struct PainleveSolution {
    RadialGrid rho_grid;
    std::vector<double> psi;
    std::vector<double> psi_prime;  ///< d psi / d rho
    std::vector<double> a_coeffs;   ///< small-rho series coefficients a_0..a_N
    double envelope_c = 0.0;        ///< amplitude of the K0 envelope at infinity
    double match_residual = 0.0;    ///< two-sided shooting mismatch at rho = 1
};

/// Macdonald function K0 to >= 10 significant digits: power series for
/// rho <= 2, Steed continued fraction for rho > 2.  Throws on rho <= 0.
double bessel_k0(double rho);

/// K1, needed for the derivative of the large-rho envelope.
double bessel_k1(double rho);

/// Coefficients a_0..a_N of the expansion e^{-psi} = rho^{1/3} P(s),
/// P(s) = sum_j a_j s^j with s = rho^{4/3}, for a given leading coefficient
/// a_0 (the free parameter of the one-parameter family; the recursion fixes
/// every higher coefficient, e.g. a_1 = -9/(64 a_0)).
std::vector<double> series_small_rho(std::size_t N, double a0 = 1.0);

/// (psi, rho psi') evaluated from the truncated small-rho series.
void series_eval(const std::vector<double>& a, double rho, double* psi, double* rho_psi_prime);

/// Two-sided shooting: seed from the series at rho_min (free parameter a_0)
/// and from c K0 at rho_max (free amplitude c), integrate both halves to
/// rho = 1 and Newton-solve the two matching conditions.  Throws on
/// non-convergence.
PainleveSolution solve_painleve(double rho_min, double rho_max, std::size_t n, double tol);

/// psi and dpsi/drho at arbitrary rho > 0: cubic Hermite interpolation on the
/// stored grid, series continuation below rho_min, K0 envelope above rho_max.
void eval_psi(const PainleveSolution& sol, double rho, double* psi, double* psi_prime);

}  // namespace hbm
