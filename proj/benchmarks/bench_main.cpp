#include "nonlocal/grid.hpp"
#include "nonlocal/kernels.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/solve.hpp"
#include "nonlocal/stable_mc.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace nonlocal;

static void BM_KernelClosedForm(benchmark::State& state) {
    double b = -0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_constant(1.3, b));
        b = b > 0.5 ? -0.3 : b + 1e-3;
    }
}
BENCHMARK(BM_KernelClosedForm);

static void BM_KernelOracle(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(pv_kernel_oracle(1.3, 0.2));
}
BENCHMARK(BM_KernelOracle)->Unit(benchmark::kMillisecond);

static void BM_OperatorApply1d(benchmark::State& state) {
    StableOperator op(SpectralMeasure::fractional_laplacian(1.2, 1));
    Domain D(Interval{-1.0, 1.0});
    auto u = [](const Point& x) {
        double q = 1.0 - x[0] * x[0];
        return q > 0.0 ? std::pow(q, 0.6) : 0.0;
    };
    for (auto _ : state) benchmark::DoNotOptimize(apply(op, u, point1(0.3), D));
}
BENCHMARK(BM_OperatorApply1d)->Unit(benchmark::kMicrosecond);

static void BM_OperatorApplyDisk(benchmark::State& state) {
    StableOperator op(SpectralMeasure::fractional_laplacian(1.0, 2));
    Domain D(Disk{1.0});
    auto u = [](const Point& x) {
        double q = 1.0 - x[0] * x[0] - x[1] * x[1];
        return q > 0.0 ? q * q : 0.0;
    };
    for (auto _ : state) benchmark::DoNotOptimize(apply(op, u, {0.2, 0.1, 0.0}, D));
}
BENCHMARK(BM_OperatorApplyDisk)->Unit(benchmark::kMillisecond);

static void BM_Stiffness1d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StableOperator op(SpectralMeasure::fractional_laplacian(1.0, 1));
    Domain D(Interval{-1.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(assemble_matrix_1d(op, D, n));
}
BENCHMARK(BM_Stiffness1d)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_EllipticSolve1d(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto g = Grid::interval(Domain(Interval{-1.0, 1.0}), n);
    auto A = DiscreteOperator::build(StableOperator(SpectralMeasure::fractional_laplacian(1.0, 1)), g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_elliptic(A, [](const Point&) { return -1.0; }));
}
BENCHMARK(BM_EllipticSolve1d)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_EllipticSolveSquare(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto g = Grid::square(Domain(Square{1.0}), n);
    auto m = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    auto A = DiscreteOperator::build(StableOperator(m), g);
    for (auto _ : state) benchmark::DoNotOptimize(solve_elliptic(A, [](const Point&) { return -1.0; }));
}
BENCHMARK(BM_EllipticSolveSquare)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_StableIncrement(benchmark::State& state) {
    auto pairs = increment_pairs(SpectralMeasure::fractional_laplacian(1.3, 1));
    auto rng = path_rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_increment(pairs, 1.3, 1e-3, rng));
}
BENCHMARK(BM_StableIncrement);

static void BM_ExitTime(benchmark::State& state) {
    PathConfig cfg{SpectralMeasure::fractional_laplacian(1.0, 1), Domain(Interval{-1.0, 1.0}), 1e-3, 3, 1000, 1, 50.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(elliptic_representation(cfg, [](const Point&) { return -1.0; }, point1(0.0)));
}
BENCHMARK(BM_ExitTime)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
