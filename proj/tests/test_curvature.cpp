#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbm/curvature.hpp"

using namespace hbm;

namespace {

PainleveSolution& shared_sol() {
    static PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    return sol;
}

}  // namespace

TEST_CASE("limit Gram of the canonical plane") {
    FiducialData lim = make_limiting_fiducial(1.0, make_log_grid(1e-3, 1.0, 300));
    OperatorContext ctx = make_context(lim);
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 1.0)};
    const double g = gram_infinity(ctx, f1, f2);
    CHECK(g > 0.0);
    // Scaling: quadratic in each argument.
    HolQuadDiff f1s = f1;
    f1s.coeffs[0] *= 3.0;
    CHECK(gram_infinity(ctx, f1s, f2) == doctest::Approx(9.0 * g).epsilon(1e-10));
}

TEST_CASE("orthogonalization removes only the real span of f1") {
    FiducialData lim = make_limiting_fiducial(1.0, make_log_grid(1e-3, 1.0, 300));
    OperatorContext ctx = make_context(lim);
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0), cplx(0.5, 0.0)};
    f2.coeffs = {cplx(0.3, 1.0), cplx(-0.2, 0.4)};
    // Adding a real multiple of f1 must not change the orthogonalized result.
    HolQuadDiff shifted = f2;
    for (std::size_t k = 0; k < shifted.coeffs.size(); ++k)
        shifted.coeffs[k] += 0.7 * f1.coeffs[k];
    HolQuadDiff o1 = orthogonalize_against(ctx, f1, f2);
    HolQuadDiff o2 = orthogonalize_against(ctx, f1, shifted);
    REQUIRE(o1.coeffs.size() == o2.coeffs.size());
    for (std::size_t k = 0; k < o1.coeffs.size(); ++k)
        CHECK(std::abs(o1.coeffs[k] - o2.coeffs[k]) < 1e-10);
    // i * f1 spans an independent direction of the same plane and survives.
    HolQuadDiff if1;
    if1.coeffs = {cplx(0.0, 1.0), cplx(0.0, 0.5)};
    HolQuadDiff o3 = orthogonalize_against(ctx, f1, if1);
    double norm = 0.0;
    for (const cplx& c : o3.coeffs) norm += std::norm(c);
    CHECK(norm > 0.1);
}

TEST_CASE("degenerate plane is rejected") {
    FiducialData fd = build_fiducial(shared_sol(), 8.0, make_log_grid(1e-3, 1.0, 200));
    HolQuadDiff f1;
    f1.coeffs = {cplx(1.0, 0.0)};
    CHECK_THROWS_AS((void)sectional_curvature(f1, f1, fd, 4), DegeneratePlaneError);
}

TEST_CASE("curvature point of the canonical plane") {
    FiducialData fd = build_fiducial(shared_sol(), 8.0, make_log_grid(1e-3, 1.0, 300));
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 1.0)};
    CurvaturePoint p = sectional_curvature(f1, f2, fd, 8);
    CHECK(p.gram > 0.0);
    CHECK(p.K == doctest::Approx((p.term_oneill + p.term_gauss_1 - p.term_gauss_2) / p.gram)
                     .epsilon(1e-12));
    // Swapping the frames leaves the plane, hence K, unchanged.
    CurvaturePoint q = sectional_curvature(f2, f1, fd, 8);
    CHECK(q.K == doctest::Approx(p.K).epsilon(1e-6));
}

TEST_CASE("sweep fit and quadratic scaling of the limit coefficient") {
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 1.0)};
    CurvatureConfig cfg;
    LambdaEstimate est = scan_and_fit(shared_sol(), f1, f2, {8, 16, 32}, cfg);
    CHECK(est.points.size() == 3);
    CHECK(est.slope == doctest::Approx(-4.0 / 3.0).epsilon(0.08));
    CHECK_FALSE(est.sign_change);
    HolQuadDiff f1c = f1;
    f1c.coeffs[0] *= 2.0;
    LambdaEstimate est2 = scan_and_fit(shared_sol(), f1c, f2, {8, 16, 32}, cfg);
    CHECK(est2.lambda == doctest::Approx(4.0 * est.lambda).epsilon(1e-2));
}
