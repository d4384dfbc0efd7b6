#include <benchmark/benchmark.h>

#include "gaugecert/decompose.hpp"
#include "gaugecert/gauge.hpp"
#include "gaugecert/random.hpp"
#include "gaugecert/sweep.hpp"

using namespace gaugecert;

static void BM_PartitionMatrix(benchmark::State& state) {
  auto rng = trial_stream(1, "bench-partition", 0);
  const UnitMatrix a = matrix_instance(rng, state.range(0));
  const Rational m = a.total();
  for (auto _ : state) benchmark::DoNotOptimize(partition_matrix(a, m));
}
BENCHMARK(BM_PartitionMatrix)->Arg(8)->Arg(20);

static void BM_MainDecompose(benchmark::State& state) {
  auto rng = trial_stream(1, "bench-decompose", 0);
  const Rational eps(1, 16);
  const auto bs = smallsup_generators(rng, eps, state.range(0), 50);
  const LorentzParam p(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(main_decompose(bs, eps, p));
}
BENCHMARK(BM_MainDecompose)->Arg(64)->Arg(192)->Unit(benchmark::kMillisecond);

static void BM_ConstantC(benchmark::State& state) {
  const LorentzParam p(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(constant_C(p, state.range(0)));
}
BENCHMARK(BM_ConstantC)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_UGauge(benchmark::State& state) {
  auto rng = trial_stream(1, "bench-ugauge", 0);
  TriVector x;
  for (std::int64_t i = 1; i <= state.range(0); ++i)
    for (std::int64_t j = 1; j <= i; ++j)
      if (uniform_int(rng, 0, 2) == 0) x.set(i, j, uniform_unit_rational(rng, 8) + Rational(1, 16));
  for (auto _ : state) benchmark::DoNotOptimize(u_gauge(x));
}
BENCHMARK(BM_UGauge)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_MicroOracle(benchmark::State& state) {
  auto rng = trial_stream(1, "bench-oracle", 0);
  TriVector x = micro_instance(rng);
  const Rational tol(1, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(tau_micro_oracle(x, tol));
}
BENCHMARK(BM_MicroOracle)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
