#include "hbm/tangent.hpp"

#include <cmath>

#include "hbm/field.hpp"
#include "hbm/modes.hpp"
#include "hbm/spectral.hpp"

namespace hbm {

namespace {

// Radial profile r^{k + off/2} scaled by c.
std::vector<cplx> power_profile(const RadialGrid& g, int k, int off_half, cplx c) {
    std::vector<cplx> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        p[i] = c * std::pow(g.nodes[i], k + 0.5 * off_half);
    return p;
}

std::vector<cplx> weighted_profile(const RadialGrid& g, int k, int off_half, cplx c,
                                   const std::vector<double>& w) {
    auto p = power_profile(g, k, off_half, c);
    for (std::size_t i = 0; i < g.size(); ++i) p[i] *= w[i];
    return p;
}

}  // namespace

TangentVector raw_variation(const OperatorContext& ctx, const HolQuadDiff& fdot) {
    const FiducialData& fd = *ctx.fd;
    const RadialGrid& g = fd.grid;
    const std::size_t n = g.size();
    const double t = ctx.t;
    std::vector<double> emh(n), eph_half(n), emh_half(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rhp = g.nodes[i] * fd.h_prime[i];
        emh[i] = std::exp(-fd.h[i]) * (0.5 * rhp - 0.75);
        eph_half[i] = -0.5 * (0.5 + rhp) * std::exp(fd.h[i]);
        emh_half[i] = 0.5 * (0.5 + rhp) * std::exp(-fd.h[i]);
    }
    TangentVector v;
    v.t = t;
    v.alpha = make_field(g);
    v.phi = make_field(g);
    for (std::size_t k = 0; k < fdot.coeffs.size(); ++k) {
        const cplx c = fdot.coeffs[k];
        if (c == cplx(0.0, 0.0)) continue;
        const cplx cc = std::conj(c);
        const int kk = static_cast<int>(k);
        // Higgs variation at fixed frame.
        add_term(v.phi, Slot::UR, FormType::Dz, kk, weighted_profile(g, kk, -1, c, emh));
        add_term(v.phi, Slot::UR, FormType::Dz, 2 - kk,
                 weighted_profile(g, kk, -1, cc, emh_half));
        add_term(v.phi, Slot::LL, FormType::Dz, kk - 1,
                 weighted_profile(g, kk, -1, c, eph_half));
        add_term(v.phi, Slot::LL, FormType::Dz, 1 - kk,
                 weighted_profile(g, kk, -1, cc, eph_half));
        // Connection variation (stored with the 1/t normalization), both the
        // dtheta part through f and the angle rotation part.
        std::vector<cplx> dz_a(n), dz_b(n), dzb_a(n), dzb_b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double rk1 = std::pow(g.nodes[i], kk - 1);
            const double rk2 = std::pow(g.nodes[i], kk - 2);
            dz_a[i] = (0.5 * fd.f_prime[i] * rk1 + fd.f[i] * (kk - 1) * rk2) * c / t;
            dz_b[i] = 0.5 * fd.f_prime[i] * rk1 * cc / t;
            dzb_a[i] = -0.5 * fd.f_prime[i] * rk1 * c / t;
            dzb_b[i] = (-0.5 * fd.f_prime[i] * rk1 - fd.f[i] * (kk - 1) * rk2) * cc / t;
        }
        for (Slot s : {Slot::UL, Slot::LR}) {
            const cplx sg = s == Slot::UL ? 1.0 : -1.0;
            auto scl = [&](const std::vector<cplx>& p) {
                std::vector<cplx> q = p;
                for (auto& x : q) x *= sg;
                return q;
            };
            add_term(v.alpha, s, FormType::Dz, kk - 2, scl(dz_a));
            add_term(v.alpha, s, FormType::Dz, -kk, scl(dz_b));
            add_term(v.alpha, s, FormType::Dzbar, kk, scl(dzb_a));
            add_term(v.alpha, s, FormType::Dzbar, 2 - kk, scl(dzb_b));
        }
    }
    merge_terms(v.alpha);
    merge_terms(v.phi);
    return v;
}

Field gauge_rotation(const OperatorContext& ctx, const HolQuadDiff& fdot) {
    const FiducialData& fd = *ctx.fd;
    const RadialGrid& g = fd.grid;
    Field gamma = make_field(g);
    for (std::size_t k = 0; k < fdot.coeffs.size(); ++k) {
        const cplx c = fdot.coeffs[k];
        if (c == cplx(0.0, 0.0)) continue;
        const int kk = static_cast<int>(k);
        std::vector<cplx> p(g.size()), q(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double fr = fd.f[i] * std::pow(g.nodes[i], kk - 1);
            p[i] = fr * c;
            q[i] = -fr * std::conj(c);
        }
        add_term(gamma, Slot::UL, FormType::Function, kk - 1, p);
        add_term(gamma, Slot::UL, FormType::Function, 1 - kk, q);
        std::vector<cplx> pm = p, qm = q;
        for (auto& x : pm) x = -x;
        for (auto& x : qm) x = -x;
        add_term(gamma, Slot::LR, FormType::Function, kk - 1, pm);
        add_term(gamma, Slot::LR, FormType::Function, 1 - kk, qm);
    }
    merge_terms(gamma);
    return gamma;
}

TangentVector corrected_tangent(const OperatorContext& ctx, const HolQuadDiff& fdot) {
    const FiducialData& fd = *ctx.fd;
    const RadialGrid& g = fd.grid;
    const std::size_t n = g.size();
    const double t = ctx.t;
    TangentVector v;
    v.t = t;
    v.alpha = make_field(g);
    v.phi = make_field(g);
    std::vector<double> wur(n), wll(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rhp = g.nodes[i] * fd.h_prime[i];
        wur[i] = -(0.5 - rhp) * std::exp(-fd.h[i]);
        wll[i] = -(0.5 + rhp) * std::exp(fd.h[i]);
    }
    for (std::size_t k = 0; k < fdot.coeffs.size(); ++k) {
        const cplx c = fdot.coeffs[k];
        if (c == cplx(0.0, 0.0)) continue;
        const int kk = static_cast<int>(k);
        add_term(v.phi, Slot::UR, FormType::Dz, kk, weighted_profile(g, kk, -1, c, wur));
        add_term(v.phi, Slot::LL, FormType::Dz, kk - 1, weighted_profile(g, kk, -1, c, wll));
        std::vector<cplx> pz(n), pzb(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double fp_r = fd.f_prime[i] * std::pow(g.nodes[i], kk - 1);
            pz[i] = fp_r * std::conj(c) / t;
            pzb[i] = -fp_r * c / t;
        }
        add_term(v.alpha, Slot::UL, FormType::Dz, -kk, pz);
        add_term(v.alpha, Slot::UL, FormType::Dzbar, kk, pzb);
        std::vector<cplx> mz = pz, mzb = pzb;
        for (auto& x : mz) x = -x;
        for (auto& x : mzb) x = -x;
        add_term(v.alpha, Slot::LR, FormType::Dz, -kk, mz);
        add_term(v.alpha, Slot::LR, FormType::Dzbar, kk, mzb);
    }
    merge_terms(v.alpha);
    merge_terms(v.phi);
    return v;
}

TangentVector corrected_tangent_by_subtraction(const OperatorContext& ctx,
                                               const HolQuadDiff& fdot) {
    TangentVector v = raw_variation(ctx, fdot);
    const Field gamma = gauge_rotation(ctx, fdot);
    const FieldPair act = infinitesimal_action(ctx, gamma);
    v.alpha = add(v.alpha, scale(act.first, -1.0 / ctx.t));
    v.phi = add(v.phi, scale(act.second, -1.0 / ctx.t));
    merge_terms(v.alpha);
    merge_terms(v.phi);
    return v;
}

TangentVector limit_tangent(const OperatorContext& ctx, const HolQuadDiff& fdot) {
    const RadialGrid& g = ctx.fd->grid;
    TangentVector v;
    v.t = ctx.t;
    v.alpha = make_field(g);
    v.phi = make_field(g);
    for (std::size_t k = 0; k < fdot.coeffs.size(); ++k) {
        const cplx c = fdot.coeffs[k];
        if (c == cplx(0.0, 0.0)) continue;
        const int kk = static_cast<int>(k);
        add_term(v.phi, Slot::UR, FormType::Dz, kk, power_profile(g, kk, -1, -0.5 * c));
        add_term(v.phi, Slot::LL, FormType::Dz, kk - 1, power_profile(g, kk, -1, -0.5 * c));
    }
    return v;
}

double coulomb_residual(const OperatorContext& ctx, const TangentVector& v) {
    return l2_norm(infinitesimal_action_adjoint(ctx, v.alpha, v.phi));
}

CoulombResult coulomb_project(const OperatorContext& ctx, const TangentVector& v,
                              int n_gauge_max) {
    CoulombResult res;
    const RadialGrid& g = ctx.fd->grid;
    const Field E = infinitesimal_action_adjoint(ctx, v.alpha, v.phi);
    res.residual_before = l2_norm(E);
    const FieldPair eta{E, make_field(g)};

    Field xi = make_field(g);
    auto solve_channel = [&](const ModeParam& mode) {
        const auto profiles = project_mode(eta, mode);
        double mass = 0.0;
        for (const auto& p : profiles)
            for (const cplx& x : p) mass += std::norm(x);
        if (mass == 0.0) return;
        ModeBlockOp block = assemble_gauge_block(ctx, mode);
        const auto x = block_solve(block, rhs_from_field(block, eta));
        xi = add(xi, field_from_packed(block, x).first);
    };
    for (int m = 0; m <= n_gauge_max; ++m) {
        solve_channel(make_gauge_diag_mode(m));
        if (m >= 1) solve_channel(make_gauge_offdiag_mode(m));
    }
    merge_terms(xi);

    const FieldPair act = infinitesimal_action(ctx, xi);
    res.projected.t = v.t;
    res.projected.alpha = add(v.alpha, scale(act.first, -1.0));
    res.projected.phi = add(v.phi, scale(act.second, -1.0));
    merge_terms(res.projected.alpha);
    merge_terms(res.projected.phi);
    res.residual_after = coulomb_residual(ctx, res.projected);
    res.gauge_norm = l2_norm(xi);
    return res;
}

double tangent_inner(const TangentVector& v, const TangentVector& w) {
    return inner(v.alpha, w.alpha) + inner(v.phi, w.phi);
}

}  // namespace hbm
