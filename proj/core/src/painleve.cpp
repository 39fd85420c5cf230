#include "hbm/painleve.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace hbm {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double bessel_i0(double x) {
    // Power series sum_k (x^2/4)^k / (k!)^2; used only for x <= 2.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-19 * sum) break;
    }
    return sum;
}

double bessel_i1(double x) {
    // (x/2) sum_k (x^2/4)^k / (k! (k+1)!)
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (term < 1e-19 * sum) break;
    }
    return 0.5 * x * sum;
}

double k0_small(double x) {
    // K0 = -(log(x/2)+gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 H_k
    const double q = 0.25 * x * x;
    double term = 1.0, hk = 0.0, sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        sum += term * hk;
        if (term * hk < 1e-19 * (sum + 1.0)) break;
    }
    return -(std::log(0.5 * x) + kEulerGamma) * bessel_i0(x) + sum;
}

// Steed's continued fraction for K0, K1 at x > 2.
void k0k1_large(double x, double* k0, double* k1) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    h = a1 * h;
    const double rk0 = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
    *k0 = rk0;
    *k1 = rk0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k0(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("bessel_k0: need rho > 0");
    if (rho <= 2.0) return k0_small(rho);
    double k0, k1;
    k0k1_large(rho, &k0, &k1);
    return k0;
}

double bessel_k1(double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("bessel_k1: need rho > 0");
    if (rho <= 2.0) {
        // Wronskian I1(x) K0(x) + I0(x) K1(x) = 1/x.
        return (1.0 / rho - bessel_i1(rho) * k0_small(rho)) / bessel_i0(rho);
    }
    double k0, k1;
    k0k1_large(rho, &k0, &k1);
    return k1;
}

std::vector<double> series_small_rho(std::size_t N, double a0) {
    if (a0 == 0.0) throw std::invalid_argument("series_small_rho: a0 must be nonzero");
    // Substituting e^{-psi} = rho^{1/3} P(s), s = rho^{4/3}, into the ODE
    // gives (L P)^2 - P L^2 P = s/4 - s^2 P^4 / 4 with L = (4/3) s d/ds.
    // Matching the coefficient of s^m yields a linear equation for a_m:
    //   -(16/9) m^2 a_0 a_m = delta_{m,1}/4 - (P^4)_{m-2}/4
    //                         + (8/9) sum_{0<i<m} (2i-m)^2 a_i a_{m-i}.
    std::vector<double> a(N + 1, 0.0);
    a[0] = a0;
    for (std::size_t m = 1; m <= N; ++m) {
        double rhs = (m == 1) ? 0.25 : 0.0;
        if (m >= 2) {
            // (P^4)_{m-2} depends only on a_0..a_{m-2}, all known.
            const std::size_t order = m - 2;
            std::vector<double> p2(order + 1, 0.0), p4(order + 1, 0.0);
            for (std::size_t i = 0; i <= order; ++i)
                for (std::size_t j = 0; i + j <= order; ++j) p2[i + j] += a[i] * a[j];
            for (std::size_t i = 0; i <= order; ++i)
                for (std::size_t j = 0; i + j <= order; ++j) p4[i + j] += p2[i] * p2[j];
            rhs -= 0.25 * p4[order];
        }
        for (std::size_t i = 1; i < m; ++i) {
            const double k = 2.0 * static_cast<double>(i) - static_cast<double>(m);
            rhs += (8.0 / 9.0) * k * k * a[i] * a[m - i];
        }
        a[m] = -rhs / ((16.0 / 9.0) * static_cast<double>(m * m) * a0);
    }
    return a;
}

void series_eval(const std::vector<double>& a, double rho, double* psi, double* rho_psi_prime) {
    const double s = std::pow(rho, 4.0 / 3.0);
    double P = 0.0, LP = 0.0, sk = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        P += a[j] * sk;
        LP += (4.0 / 3.0) * static_cast<double>(j) * a[j] * sk;
        sk *= s;
    }
    if (psi) *psi = -std::log(std::pow(rho, 1.0 / 3.0) * P);
    if (rho_psi_prime) *rho_psi_prime = -(1.0 / 3.0 + LP / P);
}

namespace {

using State = std::array<double, 2>;  // (psi, rho dpsi/drho) as functions of x = log rho

void ode_rhs(const State& y, State& dydx, double x) {
    dydx[0] = y[1];
    dydx[1] = 0.5 * std::exp(2.0 * x) * std::sinh(2.0 * y[0]);
}

State integrate_to(State y, double x0, double x1) {
    namespace od = boost::numeric::odeint;
    auto stepper = od::make_controlled(1e-13, 1e-13, od::runge_kutta_dopri5<State>());
    const double dt = (x1 > x0 ? 1.0 : -1.0) * 1e-3;
    od::integrate_adaptive(stepper, ode_rhs, y, x0, x1, dt);
    return y;
}

// Integrate from x0 to the last entry of xs (monotone in the direction of
// travel), recording the state at each x in xs.
std::vector<State> integrate_samples(State y, double x0, const std::vector<double>& xs) {
    namespace od = boost::numeric::odeint;
    std::vector<State> out;
    out.reserve(xs.size());
    // Samples coinciding with the seed time are the seed state itself; asking
    // the stepper for them would mean a zero-length leading step.
    std::size_t skip = 0;
    while (skip < xs.size() && xs[skip] == x0) {
        out.push_back(y);
        ++skip;
    }
    if (skip == xs.size()) return out;
    std::vector<double> times;
    times.push_back(x0);
    for (std::size_t k = skip; k < xs.size(); ++k) times.push_back(xs[k]);
    auto stepper = od::make_dense_output(1e-13, 1e-13, od::runge_kutta_dopri5<State>());
    bool at_seed = true;
    od::integrate_times(stepper, ode_rhs, y, times.begin(), times.end(),
                        (times.back() > x0 ? 1.0 : -1.0) * 1e-3, [&](const State& s, double) {
                            // integrate_times also observes the initial time.
                            if (at_seed)
                                at_seed = false;
                            else
                                out.push_back(s);
                        });
    return out;
}

State left_seed(double rho_min, const std::vector<double>& a) {
    State y;
    series_eval(a, rho_min, &y[0], &y[1]);
    return y;
}

State right_seed(double rho_max, double c) {
    State y;
    y[0] = c * bessel_k0(rho_max);
    y[1] = -c * rho_max * bessel_k1(rho_max);
    return y;
}

}  // namespace

PainleveSolution solve_painleve(double rho_min, double rho_max, std::size_t n, double tol) {
    if (!(rho_min > 0.0) || rho_min > 0.05 || rho_max < 10.0)
        throw std::invalid_argument("solve_painleve: need 0 < rho_min <= 0.05 and rho_max >= 10");
    if (!(tol >= 1e-12)) throw std::invalid_argument("solve_painleve: need tol >= 1e-12");
    if (n < 8) throw std::invalid_argument("solve_painleve: need n >= 8");

    const std::size_t Nseries = 3;
    const double x_lo = std::log(rho_min), x_hi = std::log(rho_max);

    auto residual = [&](double a0, double c) -> std::array<double, 2> {
        const auto a = series_small_rho(Nseries, a0);
        const State yl = integrate_to(left_seed(rho_min, a), x_lo, 0.0);
        const State yr = integrate_to(right_seed(rho_max, c), x_hi, 0.0);
        return {yl[0] - yr[0], yl[1] - yr[1]};
    };

    double a0 = 1.0, c = 0.35;
    std::array<double, 2> F = residual(a0, c);
    auto norm_inf = [](const std::array<double, 2>& v) {
        return std::max(std::abs(v[0]), std::abs(v[1]));
    };
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        if (norm_inf(F) <= tol) {
            converged = true;
            break;
        }
        const double ha = 1e-7 * std::max(1.0, std::abs(a0));
        const double hc = 1e-7 * std::max(1.0, std::abs(c));
        const auto Fa_p = residual(a0 + ha, c), Fa_m = residual(a0 - ha, c);
        const auto Fc_p = residual(a0, c + hc), Fc_m = residual(a0, c - hc);
        const double J00 = (Fa_p[0] - Fa_m[0]) / (2 * ha), J01 = (Fc_p[0] - Fc_m[0]) / (2 * hc);
        const double J10 = (Fa_p[1] - Fa_m[1]) / (2 * ha), J11 = (Fc_p[1] - Fc_m[1]) / (2 * hc);
        const double det = J00 * J11 - J01 * J10;
        if (det == 0.0) throw std::runtime_error("solve_painleve: singular Newton system");
        double da = -(J11 * F[0] - J01 * F[1]) / det;
        double dc = -(-J10 * F[0] + J00 * F[1]) / det;
        // Damped update: backtrack while the residual does not decrease.
        double lambda = 1.0;
        for (int bt = 0; bt < 12; ++bt) {
            const auto Fn = residual(a0 + lambda * da, c + lambda * dc);
            if (norm_inf(Fn) < norm_inf(F) || norm_inf(Fn) <= tol) {
                a0 += lambda * da;
                c += lambda * dc;
                F = Fn;
                break;
            }
            lambda *= 0.5;
        }
    }
    if (!converged && norm_inf(F) > tol) {
        throw std::runtime_error("solve_painleve: Newton matching did not converge; residual " +
                                 std::to_string(norm_inf(F)));
    }

    PainleveSolution sol;
    sol.rho_grid = make_log_grid(rho_min, rho_max, n);
    sol.a_coeffs = series_small_rho(Nseries, a0);
    sol.envelope_c = c;
    sol.match_residual = norm_inf(F);
    sol.psi.resize(n);
    sol.psi_prime.resize(n);

    // Sample the left solution on nodes with rho <= 1, the right solution on
    // the rest, each integrated in its stable direction.
    std::vector<double> xs_left, xs_right;
    std::vector<std::size_t> idx_left, idx_right;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(sol.rho_grid.nodes[i]);
        if (sol.rho_grid.nodes[i] <= 1.0) {
            xs_left.push_back(x);
            idx_left.push_back(i);
        } else {
            xs_right.push_back(x);
            idx_right.push_back(i);
        }
    }
    const auto left_states = integrate_samples(left_seed(rho_min, sol.a_coeffs), x_lo, xs_left);
    std::reverse(xs_right.begin(), xs_right.end());
    std::reverse(idx_right.begin(), idx_right.end());
    const auto right_states = integrate_samples(right_seed(rho_max, c), x_hi, xs_right);
    for (std::size_t k = 0; k < idx_left.size(); ++k) {
        const std::size_t i = idx_left[k];
        sol.psi[i] = left_states[k][0];
        sol.psi_prime[i] = left_states[k][1] / sol.rho_grid.nodes[i];
    }
    for (std::size_t k = 0; k < idx_right.size(); ++k) {
        const std::size_t i = idx_right[k];
        sol.psi[i] = right_states[k][0];
        sol.psi_prime[i] = right_states[k][1] / sol.rho_grid.nodes[i];
    }
    return sol;
}

void eval_psi(const PainleveSolution& sol, double rho, double* psi, double* psi_prime) {
    if (!(rho > 0.0)) throw std::invalid_argument("eval_psi: need rho > 0");
    const auto& g = sol.rho_grid;
    if (rho < g.r_min) {
        double p, rpp;
        series_eval(sol.a_coeffs, rho, &p, &rpp);
        if (psi) *psi = p;
        if (psi_prime) *psi_prime = rpp / rho;
        return;
    }
    if (rho > g.r_max) {
        if (psi) *psi = sol.envelope_c * bessel_k0(rho);
        if (psi_prime) *psi_prime = -sol.envelope_c * bessel_k1(rho);
        return;
    }
    // Cubic Hermite interpolation in x = log rho.
    const double h = g.step();
    const double x0 = std::log(g.r_min);
    const double x = std::log(rho);
    std::size_t i = static_cast<std::size_t>(std::floor((x - x0) / h));
    if (i >= g.size() - 1) i = g.size() - 2;
    const double u = (x - (x0 + h * static_cast<double>(i))) / h;
    const double p0 = sol.psi[i], p1 = sol.psi[i + 1];
    const double m0 = sol.psi_prime[i] * g.nodes[i] * h;      // d psi/dx * h
    const double m1 = sol.psi_prime[i + 1] * g.nodes[i + 1] * h;
    const double u2 = u * u, u3 = u2 * u;
    const double H00 = 2 * u3 - 3 * u2 + 1, H10 = u3 - 2 * u2 + u;
    const double H01 = -2 * u3 + 3 * u2, H11 = u3 - u2;
    if (psi) *psi = H00 * p0 + H10 * m0 + H01 * p1 + H11 * m1;
    if (psi_prime) {
        const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1;
        const double d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
        const double dpsidx = (d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1) / h;
        *psi_prime = dpsidx / rho;
    }
}

}  // namespace hbm
