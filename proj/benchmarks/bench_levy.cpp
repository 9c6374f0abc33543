#include <benchmark/benchmark.h>

#include "levymass/bessel.hpp"
#include "levymass/levy_core.hpp"

namespace {

void BM_BesselK1(benchmark::State& state) {
  double z = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(levymass::bessel_k(1, z));
    z = z < 50.0 ? z * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_BesselK1);

void BM_EtaFromMeasure(benchmark::State& state) {
  const auto e = levymass::LevyExponent::relativistic(1.0);
  const double u = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(levymass::eta_from_measure(u, e).value);
}
BENCHMARK(BM_EtaFromMeasure)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace
