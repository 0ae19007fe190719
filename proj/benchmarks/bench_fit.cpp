#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "trobust/data.hpp"
#include "trobust/estimators.hpp"
#include "trobust/profile.hpp"

namespace {

void BM_InnerFit(benchmark::State& state) {
  const auto data = bench::makeDataset(100, static_cast<std::size_t>(state.range(0)), 2.0);
  const trobust::OptimControl control;
  const auto dof = trobust::DegreesOfFreedom::finite(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::innerMaximizeBetaSigma(dof, data, control));
  }
}
BENCHMARK(BM_InnerFit)->Arg(2)->Arg(10);

void BM_ProfilePoint(benchmark::State& state) {
  const auto data = bench::makeDataset(100, 4, 2.0);
  const trobust::OptimControl control;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::profileLogLik(2.0, data, control));
  }
}
BENCHMARK(BM_ProfilePoint);

void BM_AdjustedProfilePoint(benchmark::State& state) {
  const auto data = bench::makeDataset(100, 4, 2.0);
  const trobust::OptimControl control;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::adjustedProfileLogLik(2.0, data, control));
  }
}
BENCHMARK(BM_AdjustedProfilePoint);

// Full two-stage pipelines: estimate the degrees of freedom, then refit the
// regression at the estimate. These dominate simulation wall time.
void BM_Pipeline(benchmark::State& state) {
  const auto data = bench::makeDataset(100, 4, 2.0);
  const char* tags[] = {"profile", "adjusted", "jeffreys", "pseudo"};
  const auto spec = trobust::parseMethodTag(tags[state.range(0)]);
  const trobust::OptimControl control;
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::runPipeline(spec, data, control));
  }
}
BENCHMARK(BM_Pipeline)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_FitOLS(benchmark::State& state) {
  const auto data = bench::makeDataset(100, 4, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::fitOLS(data));
  }
}
BENCHMARK(BM_FitOLS);

void BM_FitHuber(benchmark::State& state) {
  const auto data = bench::makeDataset(100, 4, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::fitHuber(data));
  }
}
BENCHMARK(BM_FitHuber);

}  // namespace

BENCHMARK_MAIN();
