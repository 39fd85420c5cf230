#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbm/spectral.hpp"

using namespace hbm;

namespace {

PainleveSolution& shared_sol() {
    static PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    return sol;
}

std::vector<std::vector<cplx>> bump_profiles(const RadialGrid& g, std::size_t count) {
    std::vector<std::vector<cplx>> p(count, std::vector<cplx>(g.size(), 0.0));
    for (std::size_t d = 0; d < count; ++d)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double s = std::log(g.nodes[i] / g.r_min) / std::log(g.r_max / g.r_min);
            double w = 0.0;
            if (s > 0.05 && s < 0.95) {
                const double u = (s - 0.05) / 0.9;
                w = std::exp(-0.25 / (u * (1.0 - u)));
            }
            p[d][i] = w * cplx(std::cos((2.0 + d) * s), 0.4 * std::sin((1.0 + d) * s));
        }
    return p;
}

}  // namespace

TEST_CASE("smallest eigenvalues: frozen regression values") {
    FiducialData fd = build_fiducial(shared_sol(), 4.0, make_log_grid(1e-3, 1.0, 400));
    OperatorContext ctx = make_context(fd);
    const double expect[3] = {5.450450244419538, 4.9817000691125637, 5.2754881726639224};
    for (int ell : {0, 1, 2}) {
        ModeParam mode = make_pair_mode(ell, ModeSign::Plus);
        ModeBlockOp block = assemble_pair_block(ctx, mode, 2, 2);
        CHECK(smallest_eigenvalue(block) == doctest::Approx(expect[ell]).epsilon(1e-8));
    }
}

TEST_CASE("Green solve inverts the stiffness matrix") {
    FiducialData fd = build_fiducial(shared_sol(), 2.0, make_log_grid(1e-3, 1.0, 300));
    OperatorContext ctx = make_context(fd);
    ModeParam mode = make_pair_mode(1, ModeSign::Plus);
    // Dirichlet edges keep the near-null variational mode out; the unmasked
    // block is far too ill-conditioned for a solve/apply round trip.
    ModeBlockOp block = assemble_pair_block(ctx, mode, 2, 2);
    FieldPair src = field_from_profiles(mode, fd.grid, bump_profiles(fd.grid, mode.dofs.size()));
    auto rhs = rhs_from_field(block, src);
    auto x = green_solve(block, src);
    auto back = block_apply_stiffness(block, x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        num += (back[i] - rhs[i]) * (back[i] - rhs[i]);
        den += rhs[i] * rhs[i];
    }
    CHECK(std::sqrt(num / (den + 1e-300)) < 1e-8);
    // green_pairing is a symmetric bilinear form.
    FieldPair src2 = field_from_profiles(mode, fd.grid, bump_profiles(fd.grid, mode.dofs.size()));
    CHECK(green_pairing(block, src, src2) ==
          doctest::Approx(green_pairing(block, src2, src)).epsilon(1e-10));
    CHECK(green_pairing(block, src, src) > 0.0);
}

TEST_CASE("explicit radial action agrees with the composed operator") {
    FiducialData fd = build_fiducial(shared_sol(), 2.0, make_log_grid(1e-3, 1.0, 1200));
    OperatorContext ctx = make_context(fd);
    const int ell = 2;
    ModeParam mode = make_pair_mode(ell, ModeSign::Plus);
    auto comp = bump_profiles(fd.grid, 5);
    FieldPair F = field_from_profiles(mode, fd.grid, comp);
    FieldPair DF = deformation_laplacian2(ctx, F.first, F.second);
    auto proj = project_mode(DF, mode);
    auto expl = apply_pair_plus_explicit(fd, ell, comp);
    const std::size_t n = fd.grid.size();
    for (int d = 0; d < 5; ++d) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 10; i + 10 < n; ++i) {
            num += std::norm(expl[d][i] - proj[d][i]);
            den += std::norm(proj[d][i]);
        }
        CHECK(std::sqrt(num / (den + 1e-300)) < 1e-6);
    }
}

TEST_CASE("the Laplacian preserves each mode subspace") {
    FiducialData fd = build_fiducial(shared_sol(), 2.0, make_log_grid(1e-3, 1.0, 400));
    OperatorContext ctx = make_context(fd);
    for (int ell : {1, 3}) {
        ModeParam mode = make_pair_mode(ell, ModeSign::Plus);
        FieldPair F = field_from_profiles(mode, fd.grid, bump_profiles(fd.grid, mode.dofs.size()));
        FieldPair DF = deformation_laplacian2(ctx, F.first, F.second);
        FieldPair recon = field_from_profiles(mode, fd.grid, project_mode(DF, mode));
        Field d1 = add(DF.first, scale(recon.first, -1.0));
        Field d2 = add(DF.second, scale(recon.second, -1.0));
        const double leak = std::sqrt(inner(d1, d1) + inner(d2, d2));
        const double norm = std::sqrt(inner(DF.first, DF.first) + inner(DF.second, DF.second));
        CHECK(leak / (norm + 1e-300) < 1e-8);
    }
}

TEST_CASE("limiting background and decay rates") {
    FiducialData lim = make_limiting_fiducial(2.0, make_log_grid(1e-3, 1.0, 50));
    for (std::size_t i = 0; i < lim.grid.size(); ++i) {
        CHECK(lim.h[i] == 0.0);
        CHECK(lim.f[i] == doctest::Approx(0.125).epsilon(1e-14));
    }
    auto r = homogeneous_decay_rate(2, DecayBranch::SigmaPlus, DecaySubspace::Parallel, 800);
    CHECK(r.slope == doctest::Approx(-3.5).epsilon(5e-3));
    auto r2 = homogeneous_decay_rate(1, DecayBranch::SigmaMinus, DecaySubspace::Parallel, 800);
    CHECK(r2.slope == doctest::Approx(-0.5).epsilon(2e-2));
}
