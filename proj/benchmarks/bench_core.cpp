#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "dmc/chaos.hpp"
#include "dmc/crr.hpp"
#include "dmc/identities.hpp"
#include "dmc/inequalities.hpp"
#include "dmc/malliavin.hpp"

using namespace dmc;

namespace {

RandomVariable noise(const SpacePtr& sp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  std::vector<double> v(sp->size());
  for (double& x : v) x = unif(rng);
  return RandomVariable(sp, std::move(v));
}

void BM_WalshDecompose(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 1);
  for (auto _ : state) benchmark::DoNotOptimize(walsh_decompose(f));
  state.SetComplexityN(static_cast<long>(sp->size()));
}
BENCHMARK(BM_WalshDecompose)->DenseRange(4, 16, 4)->Complexity();

void BM_Divergence(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 2);
  const ProcessRV u = gradient_all(f).as_process();
  for (auto _ : state) benchmark::DoNotOptimize(divergence(u));
}
BENCHMARK(BM_Divergence)->DenseRange(4, 12, 4);

void BM_Clark(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 3);
  for (auto _ : state) benchmark::DoNotOptimize(clark(f));
}
BENCHMARK(BM_Clark)->DenseRange(4, 12, 4);

void BM_SemigroupSpectral(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 4);
  for (auto _ : state) benchmark::DoNotOptimize(semigroup(f, 1.0));
}
BENCHMARK(BM_SemigroupSpectral)->DenseRange(4, 10, 2);

void BM_SemigroupKernel(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 4);
  for (auto _ : state) benchmark::DoNotOptimize(semigroup_kernel(f, 1.0));
}
BENCHMARK(BM_SemigroupKernel)->DenseRange(4, 10, 2);

void BM_LsiReport(benchmark::State& state) {
  const SpacePtr sp = new_uniform_space(static_cast<int>(state.range(0)), 0.3);
  const RandomVariable f = noise(sp, 5);
  for (auto _ : state) benchmark::DoNotOptimize(lsi_report(f));
}
BENCHMARK(BM_LsiReport)->DenseRange(4, 12, 4);

void BM_Hedge(benchmark::State& state) {
  CrrParams p;
  p.horizon = static_cast<int>(state.range(0));
  p.r = {0.01};
  p.a = {-0.1};
  p.b = {0.12};
  p.s0 = 100.0;
  const CrrModel m = build_model(p);
  const RandomVariable call = payoff(m, PayoffKind::kCall, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(hedge(m, call));
}
BENCHMARK(BM_Hedge)->DenseRange(4, 16, 4);

}  // namespace

BENCHMARK_MAIN();
