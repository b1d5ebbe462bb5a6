#include <benchmark/benchmark.h>

#include "rapg/prox.hpp"

namespace {

using namespace rapg;

ProxProblem sphere_problem(Index n, double lambda, std::uint64_t seed) {
  const Manifold M = Manifold::sphere(n);
  std::mt19937_64 rng(seed);
  const Matrix y = M.random_point(rng);
  // |g| / coeff = 0.5 keeps the minimizer well inside the tangent ball.
  return ProxProblem{M, y, M.random_tangent(y, rng).normalized(), 2.0, lambda, 0.0};
}

void BM_ProxLinearSphere(benchmark::State& state) {
  const ProxProblem p = sphere_problem(state.range(0), 0.05, 4);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_ProxLinearSphere)->Arg(3)->Arg(200)->Arg(1000);

void BM_ProxSubgradientSphere(benchmark::State& state) {
  const ProxProblem p = sphere_problem(state.range(0), 0.05, 4);
  ProxOptions opts;
  opts.method = ProxMethod::kSubgradient;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, opts));
}
BENCHMARK(BM_ProxSubgradientSphere)->Arg(3)->Arg(200);

void BM_GridOracleS2(benchmark::State& state) {
  const ProxProblem p = sphere_problem(3, 0.05, 5);
  for (auto _ : state) benchmark::DoNotOptimize(solve_grid_oracle(p, 1.5, 0.02));
}
BENCHMARK(BM_GridOracleS2)->Unit(benchmark::kMillisecond);

}  // namespace
