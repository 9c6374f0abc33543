#include <benchmark/benchmark.h>

#include "levymass/loop_qft.hpp"

namespace {

void BM_SelfEnergyCubic(benchmark::State& state) {
  const auto cubic = levymass::CutoffPolynomial::from_coefficients(-37, 50, -14, 1);
  levymass::SelfEnergyScheme scheme;
  scheme.cutoff_radius = static_cast<double>(state.range(0));
  scheme.branch = levymass::BranchPolicy::PrincipalComplex;
  for (auto _ : state) {
    benchmark::DoNotOptimize(levymass::self_energy_estimate(-1.0, 1.0, cubic, 1.0, scheme));
  }
}
BENCHMARK(BM_SelfEnergyCubic)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_PoleSearch(benchmark::State& state) {
  const auto cubic = levymass::CutoffPolynomial::from_coefficients(-37, 50, -14, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(levymass::pole_search(1.0, cubic, 0.0, 0.0, 0.0, 20.0));
  }
}
BENCHMARK(BM_PoleSearch)->Unit(benchmark::kMicrosecond);

}  // namespace
