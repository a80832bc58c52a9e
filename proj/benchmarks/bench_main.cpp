#include <benchmark/benchmark.h>

#include "lipgm/clustering.hpp"
#include "lipgm/divergence.hpp"
#include "lipgm/learn.hpp"
#include "lipgm/numerics.hpp"
#include "lipgm/rng.hpp"
#include "lipgm/synth.hpp"

namespace {

using namespace lipgm;

SymMatrix precision(std::size_t n) { return random_ggm({n, 0.5, 0.1, 7}).omega(); }

void BM_Cholesky(benchmark::State& state) {
  const SymMatrix a = precision(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Cholesky(a).log_det());
}
BENCHMARK(BM_Cholesky)->RangeMultiplier(2)->Range(8, 128);

void BM_SymmetricEigen(benchmark::State& state) {
  const SymMatrix a = precision(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigen(a).values);
}
BENCHMARK(BM_SymmetricEigen)->RangeMultiplier(2)->Range(8, 64);

void BM_GraphicalLasso(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const SymMatrix s = empirical_covariance(sample_gaussian(random_ggm({n, 0.3, 0.1, 3}), 2 * n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(graphical_lasso(s, {0.1, 1000, 1e-6, 0}).model.omega());
}
BENCHMARK(BM_GraphicalLasso)->Arg(10)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_IsingEnumeration(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const DiscreteFactorGraph a = random_ising({n, 0.5, 0.1, 1});
  const DiscreteFactorGraph b = random_ising({n, 0.5, 0.1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(kl_discrete_exact(a, b));
}
BENCHMARK(BM_IsingEnumeration)->DenseRange(6, 14, 4);

void BM_PseudoLikelihood(benchmark::State& state) {
  const DiscreteFactorGraph m = random_ising({10, 0.5, 0.1, 1});
  const Matrix x = sample_ising_exact(m, 200, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ising_pseudolikelihood(x, {0.01, 1000, 1e-6, 0}).model.weights());
}
BENCHMARK(BM_PseudoLikelihood)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  Rng rng(5);
  Matrix rows(static_cast<std::size_t>(state.range(0)), 3);
  for (double& v : rows.data()) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(rows, 4, 9).inertia);
}
BENCHMARK(BM_KMeans)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
