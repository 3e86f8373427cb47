#include <aqrm/aqrm.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

using namespace aqrm;

namespace {

const ModelParams reference{1.2, 0.3, 1.0, 0.0};

void BM_QesPoints(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(qes_points(reference, n, Branch::plus));
}
BENCHMARK(BM_QesPoints)->DenseRange(1, 9, 4);

void BM_SolveBethe(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const ModelParams p = reference.with_g(qes_points(reference, n, Branch::plus).points.back().g);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_bethe(p, n, Branch::plus));
}
BENCHMARK(BM_SolveBethe)->DenseRange(1, 5, 2);

void BM_RegularSpectrum(benchmark::State& state)
{
    const ModelParams p = reference.with_g(0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(regular_spectrum(p, 8, static_cast<int>(state.range(0))));
    state.SetLabel("8 levels with doubling check");
}
BENCHMARK(BM_RegularSpectrum)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SegmentWronskian(benchmark::State& state)
{
    const ModelParams p = reference.with_g(0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(segment_wronskian(p, 0.3, Branch::plus));
}
BENCHMARK(BM_SegmentWronskian)->Unit(benchmark::kMicrosecond);

void BM_EigenvalueScan(benchmark::State& state)
{
    const ModelParams p = reference.with_g(0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(eigenvalue_scan(p, Branch::plus, -2.5, 1.5, 300));
}
BENCHMARK(BM_EigenvalueScan)->Unit(benchmark::kMillisecond);

void BM_FdEigensolve(benchmark::State& state)
{
    auto V = [](double x) { return x * x; };
    for (auto _ : state)
        benchmark::DoNotOptimize(fd_eigensolve(V, -10, 10, FdBoundary::dirichlet, 3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FdEigensolve)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_QesResidual(benchmark::State& state)
{
    const ModelParams p = reference.with_g(0.2);
    const auto gp = to_gaudin(solve_bethe(p, 1, Branch::plus));
    const Grid grid = Grid::uniform(0.3, 6.0, 200);
    ExtendedFunction V = [&](long double x) { return qes_potential(p, 1, Branch::plus, x); };
    ExtendedFunction Psi = [&](long double x) { return qes_wavefunction(p, 1, Branch::plus, gp.v, x); };
    for (auto _ : state)
        benchmark::DoNotOptimize(residual_check_extended(V, Psi, gp.calE, grid));
}
BENCHMARK(BM_QesResidual)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
