#include <benchmark/benchmark.h>

#include "copdes/fim.hpp"
#include "copdes/optimizer.hpp"
#include "copdes/repro.hpp"

using namespace copdes;

static void BM_CopulaPdf(benchmark::State& state) {
  const CopulaFamily families[] = {CopulaFamily::gaussian, CopulaFamily::fgm,
                                   CopulaFamily::clayton, CopulaFamily::frank,
                                   CopulaFamily::gumbel};
  CopulaFamily family = families[state.range(0)];
  CopulaSpec spec = alpha_from_tau(family, family == CopulaFamily::fgm ? 0.15 : 0.45);
  double u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdf(spec, u, 0.7));
    u = u < 0.9 ? u + 1e-7 : 0.1;
  }
}
BENCHMARK(BM_CopulaPdf)->DenseRange(0, 4);

static void BM_ScoreMoments(benchmark::State& state) {
  QuadratureRule quad = QuadratureRule::make(static_cast<int>(state.range(0)));
  CopulaSpec spec = CopulaSpec::make(CopulaFamily::clayton, 6.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(copula_score_moments(spec, true, quad));
}
BENCHMARK(BM_ScoreMoments)->Arg(64)->Arg(128);

static void BM_ElementaryBinary(benchmark::State& state) {
  BinaryLogisticProblem p = binary_example(CopulaSpec::make(CopulaFamily::frank, 5.0), true);
  LocalParameters params = p.default_params();
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elementary_fim_binary(p, x, params));
    x = x < 9.0 ? x + 1e-6 : 0.0;
  }
}
BENCHMARK(BM_ElementaryBinary);

static void BM_SensitivityScan(benchmark::State& state) {
  Problem problem = binary_example(CopulaSpec::make(CopulaFamily::frank, 5.0), true);
  QuadratureRule quad = QuadratureRule::make(64);
  FimEvaluator fim(problem, problem_default_params(problem), quad);
  DesignMeasure xi = DesignMeasure::make({0.0, 2.88, 6.73}, {0.42, 0.36, 0.22});
  SensitivityEvaluator d(xi, fim);
  for (auto _ : state) {
    double max_d = 0.0;
    for (int i = 0; i <= 1000; ++i) max_d = std::max(max_d, d(i * 0.01));
    benchmark::DoNotOptimize(max_d);
  }
}
BENCHMARK(BM_SensitivityScan);

static void BM_FedorovWynnBinary(benchmark::State& state) {
  Problem problem = binary_example(CopulaSpec::make(CopulaFamily::frank, 5.0), false);
  OptimizerConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fedorov_wynn(problem, problem_default_params(problem), config));
  }
}
BENCHMARK(BM_FedorovWynnBinary)->Unit(benchmark::kMillisecond);

static void BM_FedorovWynnLinear(benchmark::State& state) {
  Problem problem = linear_example(CopulaSpec::make(CopulaFamily::fgm, 0.45), true);
  OptimizerConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fedorov_wynn(problem, problem_default_params(problem), config));
  }
}
BENCHMARK(BM_FedorovWynnLinear)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
