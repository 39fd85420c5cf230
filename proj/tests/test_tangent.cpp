#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbm/tangent.hpp"

using namespace hbm;

namespace {

PainleveSolution& shared_sol() {
    static PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    return sol;
}

OperatorContext make_ctx(double t, FiducialData& storage) {
    storage = build_fiducial(shared_sol(), t, make_log_grid(1e-3, 1.0, 300));
    return make_context(storage);
}

double tangent_norm(const TangentVector& v) {
    return std::sqrt(inner(v.alpha, v.alpha) + inner(v.phi, v.phi));
}

double tangent_dist(const TangentVector& v, const TangentVector& w) {
    Field da = add(v.alpha, scale(w.alpha, -1.0));
    Field dp = add(v.phi, scale(w.phi, -1.0));
    return std::sqrt(inner(da, da) + inner(dp, dp));
}

}  // namespace

TEST_CASE("closed-form corrected tangent equals the subtraction route") {
    FiducialData fd;
    OperatorContext ctx = make_ctx(8.0, fd);
    HolQuadDiff f;
    f.coeffs = {cplx(1.0, 0.0), cplx(0.5, -0.25)};
    TangentVector a = corrected_tangent(ctx, f);
    TangentVector b = corrected_tangent_by_subtraction(ctx, f);
    // The subtraction route differentiates the gauge rotation numerically, so
    // agreement is at discretization accuracy, not round-off.
    CHECK(tangent_dist(a, b) / (tangent_norm(a) + 1e-300) < 1e-6);
}

TEST_CASE("limit frame has no connection part") {
    FiducialData fd;
    OperatorContext ctx = make_ctx(16.0, fd);
    HolQuadDiff f;
    f.coeffs = {cplx(1.0, 0.0)};
    TangentVector L = limit_tangent(ctx, f);
    CHECK(inner(L.alpha, L.alpha) < 1e-28);
    CHECK(inner(L.phi, L.phi) > 0.0);
}

TEST_CASE("linearity of the corrected frame in the variation") {
    FiducialData fd;
    OperatorContext ctx = make_ctx(8.0, fd);
    HolQuadDiff f1, f2, fs;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 0.0), cplx(0.0, 1.0)};
    fs.coeffs = {cplx(2.0, 0.0), cplx(0.0, -3.0)};
    TangentVector X1 = corrected_tangent(ctx, f1);
    TangentVector X2 = corrected_tangent(ctx, f2);
    TangentVector Xs = corrected_tangent(ctx, fs);
    TangentVector lin;
    lin.alpha = add(scale(X1.alpha, 2.0), scale(X2.alpha, -3.0));
    lin.phi = add(scale(X1.phi, 2.0), scale(X2.phi, -3.0));
    lin.t = Xs.t;
    CHECK(tangent_dist(Xs, lin) / (tangent_norm(Xs) + 1e-300) < 1e-10);
}

TEST_CASE("Coulomb projection reduces the constraint residual") {
    FiducialData fd;
    OperatorContext ctx = make_ctx(8.0, fd);
    HolQuadDiff f;
    f.coeffs = {cplx(1.0, 0.0)};
    TangentVector X = corrected_tangent(ctx, f);
    const double before = coulomb_residual(ctx, X);
    CoulombResult res = coulomb_project(ctx, X, 4);
    CHECK(res.residual_before == doctest::Approx(before).epsilon(1e-10));
    CHECK(res.residual_after < 0.25 * before);
    // Projection only removes a gauge direction; the vector stays close.
    CHECK(tangent_dist(res.projected, X) < tangent_norm(X));
}

TEST_CASE("tangent metric is symmetric and positive") {
    FiducialData fd;
    OperatorContext ctx = make_ctx(8.0, fd);
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 1.0)};
    TangentVector X = corrected_tangent(ctx, f1);
    TangentVector Y = corrected_tangent(ctx, f2);
    CHECK(tangent_inner(X, Y) == doctest::Approx(tangent_inner(Y, X)).epsilon(1e-12));
    CHECK(tangent_inner(X, X) > 0.0);
    CHECK(tangent_inner(X, X) ==
          doctest::Approx(inner(X.alpha, X.alpha) + inner(X.phi, X.phi)).epsilon(1e-12));
}
