#include <benchmark/benchmark.h>

#include "levymass/jump_sim.hpp"

namespace {

void BM_SampleIncrements(benchmark::State& state) {
  const auto e = levymass::LevyExponent::relativistic(1.0);
  levymass::JumpSimConfig config;
  config.n_paths = static_cast<std::size_t>(state.range(0));
  config.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(levymass::sample_increments(e, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIncrements)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
