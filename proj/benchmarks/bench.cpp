#include <benchmark/benchmark.h>

#include "hbm/curvature.hpp"

using namespace hbm;

namespace {

PainleveSolution& shared_sol() {
    static PainleveSolution sol = solve_painleve(1e-4, 12.0, 3200, 1e-10);
    return sol;
}

void BM_solve_painleve(benchmark::State& state) {
    for (auto _ : state) {
        PainleveSolution sol = solve_painleve(1e-4, 12.0, static_cast<std::size_t>(state.range(0)),
                                              1e-10);
        benchmark::DoNotOptimize(sol.envelope_c);
    }
}
BENCHMARK(BM_solve_painleve)->Arg(800)->Arg(3200)->Unit(benchmark::kMillisecond);

void BM_build_fiducial(benchmark::State& state) {
    PainleveSolution& sol = shared_sol();
    RadialGrid grid = make_log_grid(1e-3, 1.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        FiducialData fd = build_fiducial(sol, 8.0, grid);
        benchmark::DoNotOptimize(fd.f.back());
    }
}
BENCHMARK(BM_build_fiducial)->Arg(300)->Arg(1200)->Unit(benchmark::kMicrosecond);

void BM_assemble_pair_block(benchmark::State& state) {
    PainleveSolution& sol = shared_sol();
    FiducialData fd = build_fiducial(sol, 4.0, make_log_grid(1e-3, 1.0,
                                                             static_cast<std::size_t>(state.range(0))));
    OperatorContext ctx = make_context(fd);
    ModeParam mode = make_pair_mode(2, ModeSign::Plus);
    for (auto _ : state) {
        ModeBlockOp block = assemble_pair_block(ctx, mode, 2, 2);
        benchmark::DoNotOptimize(block.a_band.data());
    }
}
BENCHMARK(BM_assemble_pair_block)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_smallest_eigenvalue(benchmark::State& state) {
    PainleveSolution& sol = shared_sol();
    FiducialData fd = build_fiducial(sol, 4.0, make_log_grid(1e-3, 1.0, 400));
    OperatorContext ctx = make_context(fd);
    ModeParam mode = make_pair_mode(2, ModeSign::Plus);
    for (auto _ : state) {
        ModeBlockOp block = assemble_pair_block(ctx, mode, 2, 2);
        benchmark::DoNotOptimize(smallest_eigenvalue(block));
    }
}
BENCHMARK(BM_smallest_eigenvalue)->Unit(benchmark::kMillisecond);

void BM_corrected_tangent(benchmark::State& state) {
    PainleveSolution& sol = shared_sol();
    FiducialData fd = build_fiducial(sol, 16.0, make_log_grid(1e-3, 1.0, 300));
    OperatorContext ctx = make_context(fd);
    HolQuadDiff f;
    f.coeffs = {cplx(1.0, 0.0), cplx(0.5, 0.0)};
    for (auto _ : state) {
        TangentVector X = corrected_tangent(ctx, f);
        benchmark::DoNotOptimize(X.t);
    }
}
BENCHMARK(BM_corrected_tangent)->Unit(benchmark::kMicrosecond);

void BM_sectional_curvature(benchmark::State& state) {
    PainleveSolution& sol = shared_sol();
    FiducialData fd = build_fiducial(sol, 8.0, make_log_grid(1e-3, 1.0, 300));
    HolQuadDiff f1, f2;
    f1.coeffs = {cplx(1.0, 0.0)};
    f2.coeffs = {cplx(0.0, 1.0)};
    const int ell_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        CurvaturePoint p = sectional_curvature(f1, f2, fd, ell_max);
        benchmark::DoNotOptimize(p.K);
    }
}
BENCHMARK(BM_sectional_curvature)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
