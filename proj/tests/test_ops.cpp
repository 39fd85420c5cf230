#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbm/ops.hpp"

using namespace hbm;

namespace {

PainleveSolution& shared_sol() {
    static PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    return sol;
}

std::vector<cplx> windowed_profile(const RadialGrid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a1 = U(rng), a2 = U(rng), b1 = U(rng), b2 = U(rng);
    std::vector<cplx> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double s = std::log(g.nodes[i] / g.r_min) / std::log(g.r_max / g.r_min);
        double w = 0.0;
        if (s > 0.02 && s < 0.98) {
            const double u = (s - 0.02) / 0.96;
            w = std::exp(-0.25 / (u * (1.0 - u)));
        }
        p[i] = w * (cplx(a1, b1) * std::sin(5 * s) + cplx(a2, b2) * std::cos(3 * s));
    }
    return p;
}

Field random_field(const RadialGrid& g, int deg, std::mt19937& rng) {
    Field F = make_field(g);
    std::uniform_int_distribution<int> N(-3, 3);
    for (Slot s : {Slot::UL, Slot::UR, Slot::LL, Slot::LR}) {
        if (deg == 0) add_term(F, s, FormType::Function, N(rng), windowed_profile(g, rng));
        if (deg == 1) {
            add_term(F, s, FormType::Dz, N(rng), windowed_profile(g, rng));
            add_term(F, s, FormType::Dzbar, N(rng), windowed_profile(g, rng));
        }
        if (deg == 2) add_term(F, s, FormType::Area, N(rng), windowed_profile(g, rng));
    }
    return F;
}

Field skew_part(const Field& F) { return add(F, scale(adjoint(F), -1.0)); }

double pair_norm(const FieldPair& p) {
    return std::sqrt(inner(p.first, p.first) + inner(p.second, p.second));
}

double pair_diff(const FieldPair& a, const FieldPair& b) {
    Field d1 = add(a.first, scale(b.first, -1.0));
    Field d2 = add(a.second, scale(b.second, -1.0));
    return std::sqrt(inner(d1, d1) + inner(d2, d2));
}

OperatorContext& shared_ctx() {
    static FiducialData fd = build_fiducial(shared_sol(), 4.0, make_log_grid(1e-3, 1.0, 1600));
    static OperatorContext ctx = make_context(fd);
    return ctx;
}

}  // namespace

TEST_CASE("covariant derivative adjoint pair") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(314);
    for (int k = 0; k < 5; ++k) {
        Field f0 = skew_part(random_field(g, 0, rng));
        Field f1 = skew_part(random_field(g, 1, rng));
        const double lhs = inner(cov_d(ctx, f0), f1);
        const double rhs = inner(f0, cov_d_star(ctx, f1));
        const double scale = l2_norm(cov_d(ctx, f0)) * l2_norm(f1) + 1e-300;
        CHECK(std::abs(lhs - rhs) / scale < 1e-9);
    }
}

TEST_CASE("linearized operator adjointness on the deformation class") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(2718);
    for (int k = 0; k < 8; ++k) {
        Field a = skew_part(random_field(g, 1, rng));
        Field phi = component(random_field(g, 1, rng), FormType::Dz);
        Field mu = skew_part(random_field(g, 2, rng));
        Field sg = random_field(g, 2, rng);
        FieldPair Lxi = linearized_op(ctx, a, phi);
        FieldPair Lad = linearized_op_adjoint(ctx, mu, sg);
        const double lhs = inner(Lxi.first, mu) + inner(Lxi.second, sg);
        const double rhs = inner(a, Lad.first) + inner(phi, Lad.second);
        CHECK(std::abs(lhs - rhs) / (pair_norm(Lxi) * pair_norm({mu, sg}) + 1e-300) < 1e-9);
    }
}

TEST_CASE("gauge action adjointness") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(99);
    for (int k = 0; k < 8; ++k) {
        Field gamma = skew_part(random_field(g, 0, rng));
        Field alpha = skew_part(random_field(g, 1, rng));
        Field psi = component(random_field(g, 1, rng), FormType::Dz);
        FieldPair ig = infinitesimal_action(ctx, gamma);
        Field iad = infinitesimal_action_adjoint(ctx, alpha, psi);
        const double lhs = inner(ig.first, alpha) + inner(ig.second, psi);
        const double rhs = inner(gamma, iad);
        const double scale = pair_norm(ig) * pair_norm({alpha, psi}) + 1e-300;
        CHECK(std::abs(lhs - rhs) / scale < 1e-9);
    }
}

TEST_CASE("degree-2 Laplacian is the composition L L*") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(4242);
    Field mu = skew_part(random_field(g, 2, rng));
    Field sg = random_field(g, 2, rng);
    FieldPair direct = deformation_laplacian2(ctx, mu, sg);
    FieldPair ad = linearized_op_adjoint(ctx, mu, sg);
    FieldPair comp = linearized_op(ctx, ad.first, ad.second);
    CHECK(pair_diff(direct, comp) / (pair_norm(direct) + 1e-300) < 1e-12);
    // Nonnegativity: <L L* eta, eta> = ||L* eta||^2 >= 0.
    const double quad = inner(direct.first, mu) + inner(direct.second, sg);
    CHECK(quad >= -1e-10 * pair_norm({mu, sg}) * pair_norm({mu, sg}));
    CHECK(quad == doctest::Approx(inner(ad.first, ad.first) + inner(ad.second, ad.second))
                      .epsilon(1e-8));
}

TEST_CASE("moment-map pairing is symmetric and bilinear") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(5);
    FieldPair v{skew_part(random_field(g, 1, rng)),
                component(random_field(g, 1, rng), FormType::Dz)};
    FieldPair w{skew_part(random_field(g, 1, rng)),
                component(random_field(g, 1, rng), FormType::Dz)};
    FieldPair qvw = q_form(v, w);
    FieldPair qwv = q_form(w, v);
    CHECK(pair_diff(qvw, qwv) / (pair_norm(qvw) + 1e-300) < 1e-8);
    FieldPair zero{make_field(g), make_field(g)};
    CHECK(pair_norm(q_form(v, zero)) < 1e-14);
    // Scaling in the first slot.
    FieldPair v2{scale(v.first, 2.0), scale(v.second, 2.0)};
    FieldPair q2 = q_form(v2, w);
    FieldPair q1s{scale(qvw.first, 2.0), scale(qvw.second, 2.0)};
    CHECK(pair_diff(q2, q1s) / (pair_norm(q2) + 1e-300) < 1e-12);
}

TEST_CASE("degree-0 Laplacian symmetric and nonnegative on the gauge class") {
    OperatorContext& ctx = shared_ctx();
    const RadialGrid& g = ctx.fd->grid;
    std::mt19937 rng(6);
    Field gamma = skew_part(random_field(g, 0, rng));
    Field eta = skew_part(random_field(g, 0, rng));
    Field Lg = deformation_laplacian0(ctx, gamma);
    Field Le = deformation_laplacian0(ctx, eta);
    const double scale = l2_norm(Lg) * l2_norm(eta) + 1e-300;
    CHECK(std::abs(inner(Lg, eta) - inner(gamma, Le)) / scale < 1e-9);
    CHECK(inner(Lg, gamma) >= 0.0);
}
