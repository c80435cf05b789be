#include <benchmark/benchmark.h>

#include "nhscat/designer.hpp"

using namespace nhscat;

static void BM_Design(benchmark::State& state) {
  const auto code = all_devices[static_cast<std::size_t>(state.range(0))];
  DeviceSpec spec;
  spec.code = code;
  spec.targets = default_targets(code);
  spec.constraint = default_constraint(code);
  for (auto _ : state) benchmark::DoNotOptimize(design_device(spec));
  state.SetLabel(to_string(code));
}
// TR/A, T/R, T/A, TR/R, TR/T
BENCHMARK(BM_Design)->Arg(0)->Arg(1)->Arg(2)->Arg(3)->Arg(5)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
