#include <benchmark/benchmark.h>

#include <cmath>

#include "confdim/dimension.hpp"
#include "confdim/measures.hpp"
#include "confdim/pressure.hpp"
#include "confdim/transfer.hpp"

using namespace confdim;

static void BM_PressureContinuedFraction(benchmark::State& state) {
  const SystemSpec s = system_from_family(continued_fraction_family(), 3);
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pressure(s, 0.7, depth).value);
}
BENCHMARK(BM_PressureContinuedFraction)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_BowenContinuedFraction(benchmark::State& state) {
  const SystemSpec s = system_from_family(continued_fraction_family(), 2);
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bowen_solve(s, depth, 1e-6).h);
}
BENCHMARK(BM_BowenContinuedFraction)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_GoldenScan(benchmark::State& state) {
  const auto fam = golden_family();
  for (auto _ : state) benchmark::DoNotOptimize(truncation_scan(fam, 2, 12, 1, 1e-12).rows.size());
}
BENCHMARK(BM_GoldenScan)->Unit(benchmark::kMillisecond);

static void BM_TransferEigen(benchmark::State& state) {
  const SystemSpec s = system_from_family(continued_fraction_family(), 3);
  const OperatorMatrix m = build_operator(s, PotentialSpec::geometric(0.7056609080287375), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenmeasure(m).eigenvalue);
  state.counters["states"] = static_cast<double>(m.size());
}
BENCHMARK(BM_TransferEigen)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_CorrelationCurve(benchmark::State& state) {
  const SampleCloud cloud = sample(LineMeasure::uniform(0.0, 1.0), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(correlation_curve(cloud, {1e-3, 1e-1, 20}).slope);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CorrelationCurve)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_SampleCantor(benchmark::State& state) {
  const SystemSpec s = system_from_family(cantor_family({1.0 / 3.0, 1.0 / 3.0}), 2);
  const CylinderMeasure m = conformal_cylinder_measure(s, std::log(2.0) / std::log(3.0), 8);
  for (auto _ : state) benchmark::DoNotOptimize(sample(m, 10000, 5).points.data());
}
BENCHMARK(BM_SampleCantor)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
