#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "trobust/data.hpp"
#include "trobust/likelihood.hpp"
#include "trobust/matrix.hpp"

namespace {

trobust::ModelParams paramsFor(const trobust::Dataset& data, double nu) {
  trobust::ModelParams params;
  params.beta = trobust::Vector(data.p(), 1.0);
  params.sigma = 1.1;
  params.dof = trobust::DegreesOfFreedom::finite(nu);
  return params;
}

void BM_TLogLikelihood(benchmark::State& state) {
  const auto data = bench::makeDataset(300, static_cast<std::size_t>(state.range(0)), 2.0);
  const auto params = paramsFor(data, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::tLogLikelihood(params, data));
  }
}
BENCHMARK(BM_TLogLikelihood)->Arg(5)->Arg(60);

void BM_ScoreBetaSigma(benchmark::State& state) {
  const auto data = bench::makeDataset(300, static_cast<std::size_t>(state.range(0)), 2.0);
  const auto params = paramsFor(data, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::scoreBetaSigma(params, data));
  }
}
BENCHMARK(BM_ScoreBetaSigma)->Arg(5)->Arg(60);

void BM_ObservedInfoBetaSigma(benchmark::State& state) {
  const auto data = bench::makeDataset(300, static_cast<std::size_t>(state.range(0)), 2.0);
  const auto params = paramsFor(data, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::observedInfoBetaSigma(params, data));
  }
}
BENCHMARK(BM_ObservedInfoBetaSigma)->Arg(5)->Arg(60);

void BM_ExpectedFisherInfo(benchmark::State& state) {
  const auto data = bench::makeDataset(300, static_cast<std::size_t>(state.range(0)), 2.0);
  const auto params = paramsFor(data, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trobust::expectedFisherInfo(params, data));
  }
}
BENCHMARK(BM_ExpectedFisherInfo)->Arg(5)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
