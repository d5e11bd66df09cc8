#include <benchmark/benchmark.h>

#include "lrsaddle/meo.hpp"
#include "lrsaddle/objective.hpp"
#include "lrsaddle/rng.hpp"
#include "lrsaddle/solver.hpp"

namespace {

using namespace lrsaddle;

SyntheticProblem instance(Index n, Index r) {
  GeneratorOptions opts;
  opts.n = n;
  opts.m = n;
  opts.r = r;
  opts.condition_number = 2.0;
  opts.seed = 1;
  return synthetic_instance(opts);
}

FactorPair point(Index n, Index r, std::uint64_t seed) {
  Rng rng(seed);
  return {rng.gaussian_matrix(n, r), rng.gaussian_matrix(n, r)};
}

void BM_Gradient(benchmark::State& state) {
  const Index n = state.range(0), r = state.range(1);
  const SyntheticProblem prob = instance(n, r);
  ObjectiveHandle h(prob.oracle, r);
  const FactorPair w = point(n, r, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.gradient(w));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Gradient)->Args({20, 3})->Args({50, 5})->Args({200, 8});

void BM_HessApply(benchmark::State& state) {
  const Index n = state.range(0), r = state.range(1);
  const SyntheticProblem prob = instance(n, r);
  ObjectiveHandle h(prob.oracle, r);
  const FactorPair w = point(n, r, 2);
  Rng rng(3);
  const Direction d{rng.gaussian_matrix(n, r), rng.gaussian_matrix(n, r)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(h.hess_apply(w, d));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HessApply)->Args({20, 3})->Args({50, 5})->Args({200, 8});

void BM_MinEigOracle(benchmark::State& state) {
  const Index n = state.range(0), r = state.range(1);
  const SyntheticProblem prob = instance(n, r);
  ObjectiveHandle h(prob.oracle, r);
  const FactorPair w = point(n, r, 2);
  const LinearOperator op = [&](const Vector& v) {
    return flatten(h.hess_apply(w, unflatten(v, n, n, r)), n, n);
  };
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_eig_oracle(op, h.dim(), 0.2, std::nullopt, 0.05, seed++));
  }
}
BENCHMARK(BM_MinEigOracle)->Args({20, 3})->Args({50, 5});

void BM_SolveFullObservation(benchmark::State& state) {
  const Index n = state.range(0), r = state.range(1);
  const SyntheticProblem prob = instance(n, r);
  SolverConfig cfg;
  cfg.seed = 4;
  const FactorPair w0 = point(n, r, 5);
  for (auto _ : state) {
    ObjectiveHandle h(prob.oracle, r);
    benchmark::DoNotOptimize(solve(h, w0, cfg));
  }
}
BENCHMARK(BM_SolveFullObservation)->Args({12, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
