#include <random>

#include <benchmark/benchmark.h>

#include "vkoga/vkoga.hpp"

namespace {

using namespace vkoga;

void BM_KernelMatrix(benchmark::State& state) {
  const Dataset data = synth(SynthGenerator::FrankeVec, state.range(0), 3, 1, 0);
  const Kernel kernel(KernelFamily::LinearMatern, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_matrix(kernel, data.inputs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelMatrix)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_GreedyRun(benchmark::State& state) {
  const Dataset data = synth(SynthGenerator::FrankeVec, 1238, 3, 3, 0);
  const Kernel kernel(KernelFamily::LinearMatern, 1.0);
  const GreedyConfig config{SelectionCriterion::FOverPGreedy, 0.2, 1e-7, 1e-3,
                            static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run(kernel, data, config).selected().size());
}
BENCHMARK(BM_GreedyRun)->Arg(50)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

// Incremental power values for all candidates vs one oracle solve per candidate.
void BM_PowerIncremental(benchmark::State& state) {
  const Dataset data = synth(SynthGenerator::FrankeVec, 500, 2, 1, 1);
  const Kernel kernel(KernelFamily::Gaussian, 2.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    GreedyState s(kernel, data);
    for (Index i = 0; static_cast<std::size_t>(i) < n; ++i) s.extend(i * 7 % data.size());
    benchmark::DoNotOptimize(s.power_sq().sum());
  }
}
BENCHMARK(BM_PowerIncremental)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_PowerOracle(benchmark::State& state) {
  const Dataset data = synth(SynthGenerator::FrankeVec, 500, 2, 1, 1);
  const Kernel kernel(KernelFamily::Gaussian, 2.0);
  std::vector<Index> rows;
  for (Index i = 0; i < state.range(0); ++i) rows.push_back(i * 7 % data.size());
  const Points centers = select_rows(data.inputs, rows);
  for (auto _ : state) {
    double total = 0.0;
    for (Index i = 0; i < data.size(); ++i) total += oracle_power(kernel, centers, data.inputs.row(i));
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_PowerOracle)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
