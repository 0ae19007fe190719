#include <benchmark/benchmark.h>

#include "trobust/special.hpp"

namespace {

void BM_LogGamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::logGamma(x + 0.5));
  }
}
BENCHMARK(BM_LogGamma)->Arg(1)->Arg(10)->Arg(1000);

void BM_Trigamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::trigamma(x + 0.25));
  }
}
BENCHMARK(BM_Trigamma)->Arg(1)->Arg(10)->Arg(1000);

// The cancellation-free gap psi'(x) - psi'(x + 1/2) sits in the innermost
// loop of the degrees-of-freedom information, so its cost matters.
void BM_TrigammaHalfGap(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::trigammaHalfGap(x + 0.25));
  }
}
BENCHMARK(BM_TrigammaHalfGap)->Arg(1)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
