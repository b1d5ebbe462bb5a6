#include <cmath>

#include <gtest/gtest.h>

#include "rapg/bench/data.hpp"
#include "rapg/errors.hpp"
#include "rapg/solvers.hpp"

using namespace rapg;

namespace {

struct Toy {
  CompositeObjective obj;
  Matrix p_star;
  Matrix x0;
  RapgParams params;
};

// f = 1/2 dist(x, p*)^2 on S^2 with x0 one radian away; Hess f >= cot(1) there.
Toy sphere_toy(double lambda = 0.0) {
  const Manifold S = Manifold::sphere(3);
  Toy t;
  t.p_star = Vector::Unit(3, 0);
  Vector dir(3);
  dir << 0.0, 0.6, 0.8;
  t.x0 = S.exp(t.p_star, dir);
  t.obj = CompositeObjective{std::make_shared<SquaredDistance>(S, t.p_star), lambda};
  t.params.L = 1.0;
  t.params.mu = 1.0 / std::tan(1.0);
  t.params.theta = 1.0;
  return t;
}

double closed_form_A_next(const RapgParams& p, double A) {
  const double c = p.theta * p.L - p.rho, q = (p.mu - p.rho) / c, xi = p.xi;
  return (xi + 2 * xi * A + std::sqrt(xi * xi + 4 * xi * xi * A + 4 * q * xi * A * A)) /
         (2 * (xi - q));
}

}  // namespace

TEST(Solvers, ParseMethod) {
  EXPECT_EQ(parse_method("rpg"), Method::kRpg);
  EXPECT_EQ(parse_method("ar-rapg"), Method::kArRapg);
  EXPECT_THROW(parse_method("fista"), ConfigError);
}

TEST(Solvers, FirstStepStartsAtX0) {
  const Toy t = sphere_toy();
  const SolverState s0 = initial_state(t.x0, t.params);
  const SolverState s1 = rapg_step(s0, t.params, t.obj, {});
  EXPECT_NEAR((s1.y - t.x0).norm(), 0.0, 1e-15);
}

TEST(Solvers, EuclideanStepMatchesRecursion) {
  const bench::LassoData d = bench::gen_lasso_data(15, 10, 3);
  const CompositeObjective obj{std::make_shared<LeastSquares>(d.B, d.b), 0.2};
  RapgParams p;
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.B.transpose() * d.B);
  p.L = es.eigenvalues().maxCoeff();
  p.mu = es.eigenvalues().minCoeff();
  p.theta = 1.0;
  Vector x = Vector::Zero(10), z = x;
  double A = p.A0;
  SolverState s = initial_state(x, p);
  const double c = p.theta * p.L;
  for (int k = 0; k < 50; ++k) {
    const double An = closed_form_A_next(p, A);
    const double beta = (c + p.mu * A) / (c + p.mu * An);
    const double gamma = c * (An - A) / (c + p.mu * An);
    const double tau = beta * An / (gamma * A + beta * An);
    const Vector y = x + tau * (z - x);
    const Vector u = y - (d.B.transpose() * (d.B * y - d.b)) / c;
    const Vector xn = (u.array().abs() - obj.lambda / c).max(0.0) * u.array().sign();
    z = beta * z + (1 - beta) * y + gamma * (xn - y);
    x = xn;
    A = An;
    s = rapg_step(s, p, obj, {});
    ASSERT_NEAR((s.x - x).norm(), 0.0, 1e-12 * (1 + x.norm())) << "k = " << k;
    ASSERT_NEAR((s.z - z).norm(), 0.0, 1e-12 * (1 + z.norm())) << "k = " << k;
  }
}

TEST(Solvers, RpgIsGradientDescentOnSmoothEuclidean) {
  const bench::LassoData d = bench::gen_lasso_data(8, 5, 4);
  const CompositeObjective obj{std::make_shared<LeastSquares>(d.B, d.b), 0.0};
  RapgParams p;
  p.L = 50.0;
  p.theta = 2.0;
  const Vector x0 = Vector::Ones(5);
  const SolverState s = rpg_step(initial_state(x0, p), p, obj, {});
  const Vector expected = x0 - d.B.transpose() * (d.B * x0 - d.b) / 100.0;
  EXPECT_NEAR((s.x - expected).norm(), 0.0, 1e-14);
}

TEST(Solvers, RapgConvergesOnSphereToy) {
  const Toy t = sphere_toy();
  Termination term;
  term.max_iters = 200;
  term.tol = 1e-24;
  const RunRecord r = run(Method::kRapg, t.x0, t.params, t.obj, {}, term);
  EXPECT_LT(r.final_F, 1e-8);
  EXPECT_NEAR(t.obj.manifold().dist(r.x_final, t.p_star), 0.0, 1e-4);

  // With L = 1 a proximal gradient step lands on p* exactly; an overestimate
  // of L makes it contract slowly and leaves room for acceleration.
  RapgParams slow = t.params;
  slow.L = 20.0;
  auto iters_to = [&](Method m) {
    Termination tt;
    tt.max_iters = 2000;
    int hit = -1;
    const RunRecord rr = run(m, t.x0, slow, t.obj, {}, tt);
    for (const auto& row : rr.rows) {
      if (row.F < 1e-6) {
        hit = row.k;
        break;
      }
    }
    return hit;
  };
  const int rapg_k = iters_to(Method::kRapg);
  const int rpg_k = iters_to(Method::kRpg);
  ASSERT_GT(rapg_k, 0);
  EXPECT_GT(rpg_k, rapg_k);
}

TEST(Solvers, StationaryStartTerminatesImmediately) {
  Toy t = sphere_toy(50.0);
  t.x0 = Vector::Unit(3, 0);  // grad f = 0 and the l1 kink holds it in place
  const RunRecord r = run(Method::kRpg, t.x0, t.params, t.obj, {}, {});
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.reason, StopReason::kEtaTolerance);
}

TEST(Solvers, MaxItersFiresExactly) {
  const CompositeObjective obj{
      std::make_shared<LeastSquares>(Matrix::Identity(2, 2), Vector::Ones(2)), 0.0};
  RapgParams p;
  p.L = 1e6;  // tiny steps, so the eta test never fires
  Termination term;
  term.tol = 1e-300;
  const RunRecord r = run(Method::kRpg, Vector::Zero(2), p, obj, {}, term);
  EXPECT_EQ(r.iterations, 10000);
  EXPECT_EQ(r.reason, StopReason::kMaxIters);
  EXPECT_EQ(r.rows.size(), 10001u);
}

TEST(Solvers, ReferenceMinimumStop) {
  const Toy t = sphere_toy();
  Termination term;
  term.F_ref = 1e-3;
  const RunRecord r = run(Method::kRapg, t.x0, t.params, t.obj, {}, term);
  EXPECT_EQ(r.reason, StopReason::kReferenceMinimum);
  EXPECT_LT(r.final_F, 1e-3);
  EXPECT_GE(r.rows[r.rows.size() - 2].F, 1e-3);
  // RPG ignores the reference.
  EXPECT_NE(run(Method::kRpg, t.x0, t.params, t.obj, {}, term).reason,
            StopReason::kReferenceMinimum);
}

TEST(Solvers, PotentialAtStart) {
  const Toy t = sphere_toy();
  const SolverState s0 = initial_state(t.x0, t.params);
  const double P0 = schedule_P(t.params, t.params.A0);
  EXPECT_NEAR(potential(s0, t.p_star, 0.0, t.params, t.obj),
              t.params.A0 * t.obj.value(t.x0) + 0.5 * P0 * 1.0, 1e-14);
  const SolverState at = initial_state(t.p_star, t.params);
  EXPECT_DOUBLE_EQ(potential(at, t.p_star, 0.0, t.params, t.obj), 0.0);
}

TEST(Solvers, RecordSparsityAndATrace) {
  RunRecord r;
  r.x_final = Vector::Zero(4);
  r.x_final(0) = 1.0;
  r.x_final(1) = 1e-7;
  EXPECT_DOUBLE_EQ(r.sparsity(), 0.75);
  r.rows.resize(2);
  r.rows[1].A = 3.0;
  EXPECT_EQ(r.A_trace(), (std::vector<double>{0.0, 3.0}));
}

TEST(Solvers, RunRejectsRestartMethod) {
  const Toy t = sphere_toy();
  EXPECT_THROW(run(Method::kArRapg, t.x0, t.params, t.obj, {}, {}), InvalidParams);
}
