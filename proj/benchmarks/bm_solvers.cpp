#include <benchmark/benchmark.h>

#include "rapg/bench/data.hpp"
#include "rapg/restart.hpp"

namespace {

using namespace rapg;

void BM_ScheduleStep(benchmark::State& state) {
  RapgParams p;
  p.L = 10.0;
  p.mu = 0.1;
  double A = 1e-3;
  for (auto _ : state) {
    const ScheduleStep s = next_schedule(p, A);
    A = s.A_next > 1e200 ? 1e-3 : s.A_next;
    benchmark::DoNotOptimize(A);
  }
}
BENCHMARK(BM_ScheduleStep);

struct SphereSetup {
  CompositeObjective obj;
  Matrix x0;
  RapgParams p;
};

SphereSetup sphere_setup(int n) {
  const bench::SphereData d = bench::gen_spca_sphere_data(20, n, 0.5, 1);
  SphereSetup s;
  s.obj = CompositeObjective{std::make_shared<SpcaSphere>(d.A), 1e-4};
  s.x0 = bench::init_point_sphere(d.A, 2);
  const bench::HessianExtremes h = bench::spca_sphere_hessian_extremes(d.A, s.x0);
  s.p.L = 5.0 * h.lambda_max;
  s.p.rho = 0.002;
  s.p.mu = std::max(h.lambda_min, s.p.rho);
  s.p.theta = default_theta(s.p.L, s.p.mu, s.p.rho, 1.0);
  return s;
}

void BM_RapgStepSpcaSphere(benchmark::State& state) {
  const SphereSetup s = sphere_setup(static_cast<int>(state.range(0)));
  SolverState st = initial_state(s.x0, s.p);
  for (auto _ : state) {
    st = rapg_step(st, s.p, s.obj, {});
    if (st.A > 1e200) st = initial_state(s.x0, s.p);
  }
}
BENCHMARK(BM_RapgStepSpcaSphere)->Arg(200)->Arg(1000);

void BM_RpgStepSpcaSphere(benchmark::State& state) {
  const SphereSetup s = sphere_setup(static_cast<int>(state.range(0)));
  SolverState st = initial_state(s.x0, s.p);
  for (auto _ : state) st = rpg_step(st, s.p, s.obj, {});
}
BENCHMARK(BM_RpgStepSpcaSphere)->Arg(200)->Arg(1000);

void BM_ArRapgObliqueRun(benchmark::State& state) {
  const bench::ObliqueData d = bench::gen_spca_oblique_data(20, 200, 4, 1);
  const CompositeObjective obj{std::make_shared<SpcaOblique>(d.A, d.d2), 1.0};
  RapgParams p;
  p.L = 2.0 * d.d2.squaredNorm();
  p.mu = 1.0;
  p.rho = 0.5;
  p.theta = default_theta(p.L, p.mu, p.rho, 1.0);
  Termination term;
  term.max_iters = 200;
  for (auto _ : state) benchmark::DoNotOptimize(ar_rapg_run(d.V, p, {}, obj, {}, term));
}
BENCHMARK(BM_ArRapgObliqueRun)->Unit(benchmark::kMillisecond);

}  // namespace
