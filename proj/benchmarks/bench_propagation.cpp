#include <benchmark/benchmark.h>

#include "levymass/propagation.hpp"

namespace {

void BM_Evolve(benchmark::State& state) {
  const levymass::Grid1D grid(static_cast<std::size_t>(state.range(0)), 64.0);
  const auto e = levymass::LevyExponent::relativistic(1.0);
  const auto psi = levymass::gaussian_packet(grid, 0.0, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(levymass::evolve(psi, 0.1, e));
}
BENCHMARK(BM_Evolve)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMicrosecond);

void BM_TransitionDensity(benchmark::State& state) {
  const levymass::Grid1D grid(256, 32.0);
  const auto e = levymass::LevyExponent::relativistic(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(levymass::transition_density(e, 1.0, grid));
}
BENCHMARK(BM_TransitionDensity)->Unit(benchmark::kMicrosecond);

}  // namespace
