#include <benchmark/benchmark.h>

#include <cmath>

#include "nhscat/born.hpp"
#include "nhscat/oracle.hpp"
#include "nhscat/solver.hpp"

using namespace nhscat;

namespace {

SampledKernel smooth_kernel(std::size_t n) {
  return SampledKernel::from_function(1.0, n, [](double x, double y) {
    const double envelope = (1.0 - x * x) * (1.0 - x * x) * (1.0 - y * y) * (1.0 - y * y);
    return cplx(0.7 + 0.3 * x * y, 0.4 * (x - y)) * envelope;
  });
}

SolverConfig simpson(std::size_t n) {
  SolverConfig c;
  c.n_grid = n;
  c.quadrature = QuadratureRule::simpson;
  return c;
}

}  // namespace

// Both incidences from one factorization; cost grows as N^3.
static void BM_ScatterAll(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampledKernel v = smooth_kernel(n);
  for (auto _ : state) benchmark::DoNotOptimize(scatter_all(v, 1.3, simpson(n)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScatterAll)->Arg(101)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_ScatterWithAdjoint(benchmark::State& state) {
  const SampledKernel v = smooth_kernel(401);
  for (auto _ : state) benchmark::DoNotOptimize(scatter_all(v, 1.3, simpson(401), true));
}
BENCHMARK(BM_ScatterWithAdjoint)->Unit(benchmark::kMillisecond);

static void BM_Oracle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampledKernel v = smooth_kernel(n);
  for (auto _ : state) benchmark::DoNotOptimize(scatter_oracle(v, 1.3, Side::left));
}
BENCHMARK(BM_Oracle)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond);

static void BM_InverseSquareGraded(benchmark::State& state) {
  const RegularizedInverseSquare v{1.225 / (4.0 * M_PI), 1e-4, 4.0, false};
  SolverConfig c;
  c.graded_max_panel = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(scatter_all(v, 2.0, c));
}
BENCHMARK(BM_InverseSquareGraded)->Unit(benchmark::kMillisecond);

static void BM_TuneAlpha(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tune_alpha(1e-4, 1.0));
}
BENCHMARK(BM_TuneAlpha)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
