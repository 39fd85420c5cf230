#include "hbm/fiducial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hbm {

namespace {

// -(3/8) (L P)/P with L = (4/3) s d/ds evaluated from the small-rho series;
// equals 1/8 + (3/8) rho psi' without the cancellation at small rho.
double f_from_series(const std::vector<double>& a, double rho) {
    const double s = std::pow(rho, 4.0 / 3.0);
    double P = 0.0, LP = 0.0, sk = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        P += a[j] * sk;
        LP += (4.0 / 3.0) * static_cast<double>(j) * a[j] * sk;
        sk *= s;
    }
    return -(3.0 / 8.0) * LP / P;
}

}  // namespace

FiducialData build_fiducial(const PainleveSolution& sol, double t, const RadialGrid& grid) {
    if (!(t >= 1.0)) throw std::invalid_argument("build_fiducial: need t >= 1");
    FiducialData fd;
    fd.t = t;
    fd.grid = grid;
    const std::size_t n = grid.size();
    fd.h.resize(n);
    fd.h_prime.resize(n);
    fd.f.resize(n);
    fd.f_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double rho = (8.0 / 3.0) * t * std::pow(r, 1.5);
        double psi, psi_prime;
        eval_psi(sol, rho, &psi, &psi_prime);
        fd.h[i] = psi;
        fd.h_prime[i] = psi_prime * 4.0 * t * std::sqrt(r);
        if (rho < sol.rho_grid.r_min) {
            fd.f[i] = f_from_series(sol.a_coeffs, rho);
        } else {
            fd.f[i] = 0.125 + 0.25 * r * fd.h_prime[i];
        }
        fd.f_prime[i] = 2.0 * t * t * r * r * std::sinh(2.0 * fd.h[i]);
    }
    return fd;
}

FiducialSweep check_fiducial_sweep(const PainleveSolution& sol, const std::vector<double>& t_sweep,
                                   const RadialGrid& grid, double r0) {
    if (t_sweep.empty()) throw std::invalid_argument("check_fiducial_sweep: empty sweep");
    FiducialSweep sweep;
    std::vector<double> prev_f;
    sweep.f_monotone_in_t = true;
    for (double t : t_sweep) {
        const FiducialData fd = build_fiducial(sol, t, grid);
        FiducialSweepRow row;
        row.t = t;
        row.f_min = *std::min_element(fd.f.begin(), fd.f.end());
        row.f_max = *std::max_element(fd.f.begin(), fd.f.end());
        row.f_in_range = row.f_min >= -1e-12 && row.f_max <= 0.125 + 1e-12;
        row.f_nondecreasing = true;
        row.h_positive_decreasing = true;
        double b0_sum = 0.0;
        std::size_t b0_count = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = grid.nodes[i];
            const double rho = (8.0 / 3.0) * t * std::pow(r, 1.5);
            if (i + 1 < grid.size()) {
                if (fd.f[i + 1] < fd.f[i] - 1e-12) row.f_nondecreasing = false;
                if (fd.h[i] <= 0.0 || fd.h[i + 1] >= fd.h[i]) row.h_positive_decreasing = false;
            }
            row.sup_f_over_r_t23 = std::max(row.sup_f_over_r_t23,
                                            fd.f[i] / r / std::pow(t, 2.0 / 3.0));
            row.sup_f_over_r2_t43 = std::max(row.sup_f_over_r2_t43,
                                             fd.f[i] / (r * r) / std::pow(t, 4.0 / 3.0));
            row.sup_sqrtr_exp_ph = std::max(row.sup_sqrtr_exp_ph, std::sqrt(r) * std::exp(fd.h[i]));
            row.sup_sqrtr_exp_mh = std::max(row.sup_sqrtr_exp_mh, std::sqrt(r) * std::exp(-fd.h[i]));
            if (r >= r0) {
                row.sup_dist_to_eighth = std::max(row.sup_dist_to_eighth, std::abs(fd.f[i] - 0.125));
                const double scale = std::sqrt(t * std::pow(r, 1.5)) * std::exp(rho);
                row.envelope_const = std::max(row.envelope_const, fd.h[i] * scale);
            }
            if (rho <= 0.05) {
                b0_sum += fd.h[i] + 0.5 * std::log(r);
                ++b0_count;
            }
        }
        row.b0_fit = b0_count ? b0_sum / static_cast<double>(b0_count) : 0.0;
        if (!prev_f.empty()) {
            for (std::size_t i = 0; i < grid.size(); ++i)
                if (fd.f[i] < prev_f[i] - 1e-10) sweep.f_monotone_in_t = false;
        }
        prev_f = fd.f;
        sweep.rows.push_back(row);
    }
    return sweep;
}

std::pair<Field, Field> fiducial_fields(const FiducialData& fd) {
    const std::size_t n = fd.grid.size();
    Field A = make_field(fd.grid);
    Field Phi = make_field(fd.grid);

    // A = -2 f dtheta diag(i,-i); with dtheta = (e^{-i th} dz - e^{i th} dzbar)/(2 i r)
    // the UL coefficient splits into (-f/r) e^{-i th} dz + (f/r) e^{i th} dzbar.
    std::vector<cplx> a_dz(n), a_dzbar(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = fd.f[i] / fd.grid.nodes[i];
        a_dz[i] = -v;
        a_dzbar[i] = v;
    }
    add_term(A, Slot::UL, FormType::Dz, -1, a_dz);
    add_term(A, Slot::UL, FormType::Dzbar, +1, a_dzbar);
    for (auto& v : a_dz) v = -v;
    for (auto& v : a_dzbar) v = -v;
    add_term(A, Slot::LR, FormType::Dz, -1, a_dz);
    add_term(A, Slot::LR, FormType::Dzbar, +1, a_dzbar);

    std::vector<cplx> ur(n), ll(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rt = std::sqrt(fd.grid.nodes[i]);
        ur[i] = rt * std::exp(-fd.h[i]);
        ll[i] = rt * std::exp(fd.h[i]);
    }
    add_term(Phi, Slot::UR, FormType::Dz, 1, ur);
    add_term(Phi, Slot::LL, FormType::Dz, 0, ll);
    return {std::move(A), std::move(Phi)};
}

}  // namespace hbm
