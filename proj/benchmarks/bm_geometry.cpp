#include <benchmark/benchmark.h>

#include "rapg/geometry.hpp"

namespace {

using rapg::Manifold;
using rapg::Matrix;

void BM_SphereExpLog(benchmark::State& state) {
  const Manifold M = Manifold::sphere(state.range(0));
  std::mt19937_64 rng(1);
  const Matrix x = M.random_point(rng);
  const Matrix eta = 0.3 * M.random_tangent(x, rng).normalized();
  for (auto _ : state) {
    const Matrix y = M.exp(x, eta);
    benchmark::DoNotOptimize(M.log(x, y));
  }
}
BENCHMARK(BM_SphereExpLog)->Arg(3)->Arg(1000);

void BM_ObliqueTransport(benchmark::State& state) {
  const Manifold M = Manifold::oblique(state.range(0), 4);
  std::mt19937_64 rng(2);
  const Matrix x = M.random_point(rng);
  const Matrix y = M.exp(x, 0.2 * M.random_tangent(x, rng));
  const Matrix v = M.random_tangent(x, rng);
  for (auto _ : state) benchmark::DoNotOptimize(M.transport(x, y, v));
}
BENCHMARK(BM_ObliqueTransport)->Arg(32)->Arg(256);

void BM_SphereDExpAdjoint(benchmark::State& state) {
  const Manifold M = Manifold::sphere(state.range(0));
  std::mt19937_64 rng(3);
  const Matrix x = M.random_point(rng);
  const Matrix eta = 0.5 * M.random_tangent(x, rng).normalized();
  const Matrix w = M.random_tangent(M.exp(x, eta), rng);
  for (auto _ : state) benchmark::DoNotOptimize(M.d_exp_adjoint(x, eta, w));
}
BENCHMARK(BM_SphereDExpAdjoint)->Arg(1000);

}  // namespace
