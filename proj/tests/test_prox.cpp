#include <cmath>

#include <gtest/gtest.h>

#include "rapg/errors.hpp"
#include "rapg/objective.hpp"
#include "rapg/prox.hpp"

using namespace rapg;

namespace {

ProxProblem random_s2(std::mt19937_64& rng) {
  const Manifold M = Manifold::sphere(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Matrix y = M.random_point(rng);
  const double lambda = 0.05 + U(rng);
  // Above 3 sqrt(3) lambda the subproblem is strongly convex on the ball, so
  // the stationary point is the global minimizer the grid finds. |g| < coeff
  // keeps that minimizer well inside the grid's ball.
  const double coeff = 3.0 * std::sqrt(3.0) * lambda + 0.5 + 4.0 * U(rng);
  const Matrix g = (0.8 * coeff * U(rng)) * M.random_tangent(y, rng).normalized();
  return ProxProblem{M, y, g, coeff, lambda, 0.0};
}

}  // namespace

TEST(Prox, EllValueBasics) {
  const Manifold M = Manifold::sphere(3);
  std::mt19937_64 rng(1);
  const Matrix y = M.random_point(rng);
  const Matrix g = M.random_tangent(y, rng);
  const ProxProblem p{M, y, g, 2.5, 0.4, 0.0};
  EXPECT_DOUBLE_EQ(ell_value(p, Matrix::Zero(3, 1)), h_l1_value(0.4, y));

  const ProxProblem q{M, y, g, 2.5, 0.0, 0.0};
  EXPECT_NEAR(ell_value(q, -g / 2.5), -g.squaredNorm() / 5.0, 1e-15);
}

TEST(Prox, SmoothCaseIsGradientStep) {
  const Manifold M = Manifold::sphere(6);
  std::mt19937_64 rng(2);
  const Matrix y = M.random_point(rng);
  const Matrix g = M.random_tangent(y, rng);
  const ProxProblem p{M, y, g, 3.0, 0.0, 0.0};
  const ProxSolution s = solve(p);
  EXPECT_NEAR((s.eta + g / 3.0).norm(), 0.0, 1e-14);
  EXPECT_NEAR(stationarity_residual(p, -g / 3.0), 0.0, 1e-14);
}

TEST(Prox, StationaryOrigin) {
  const Manifold M = Manifold::sphere(3);
  const ProxProblem p{M, Vector::Unit(3, 0), Vector::Zero(3), 2.0, 1.0, 0.0};
  const ProxSolution s = solve(p);
  EXPECT_EQ(s.eta.norm(), 0.0);
  const ProxSolution grid = solve_grid_oracle(p, 1.0, 0.01);
  EXPECT_GE(grid.ell_at_eta, s.ell_at_eta - 1e-15);
}

TEST(Prox, EuclideanSoftThreshold) {
  const Manifold R = Manifold::euclidean(4);
  Vector y(4), g(4);
  y << 1.0, -0.2, 0.05, 0.0;
  g << 0.5, 0.1, -0.3, 2.0;
  const ProxProblem p{R, y, g, 2.0, 0.3, 0.0};
  // argmin_x lambda |x| + coeff/2 (x - (y - g/coeff))^2, coordinatewise.
  const Vector u = y - g / 2.0;
  const Vector x = (u.array().abs() - 0.15).max(0.0) * u.array().sign();
  EXPECT_NEAR((solve(p).eta - (x - y)).norm(), 0.0, 1e-15);
}

TEST(Prox, MatchesGridOracleOnS2) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const ProxProblem p = random_s2(rng);
    const ProxSolution s = solve(p);
    const ProxSolution grid = solve_grid_oracle(p, 1.5, 0.02);
    EXPECT_LE(s.ell_at_eta, s.ell_at_zero);
    EXPECT_NEAR(s.ell_at_eta, grid.ell_at_eta, 1e-6);
    EXPECT_LE(s.residual, 1e-10 * std::sqrt(3.0));
  }
}

TEST(Prox, SubgradientSolverFindsNearOptimum) {
  std::mt19937_64 rng(4);
  ProxOptions opts;
  opts.method = ProxMethod::kSubgradient;
  for (int t = 0; t < 10; ++t) {
    const ProxProblem p = random_s2(rng);
    const ProxSolution s = solve(p, opts);
    EXPECT_LE(s.ell_at_eta, s.ell_at_zero);
    EXPECT_NEAR(s.ell_at_eta, solve(p).ell_at_eta, 1e-3);
  }
}

TEST(Prox, ObliqueColumnsSolveIndependently) {
  const Manifold O = Manifold::oblique(3, 2);
  std::mt19937_64 rng(5);
  const Matrix y = O.random_point(rng);
  const Matrix g = O.random_tangent(y, rng);
  const ProxSolution whole = solve(ProxProblem{O, y, g, 2.0, 0.3, 0.0});
  const Manifold S = Manifold::sphere(3);
  for (Index j = 0; j < 2; ++j) {
    const ProxSolution col = solve(ProxProblem{S, y.col(j), g.col(j), 2.0, 0.3, 0.0});
    EXPECT_NEAR((whole.eta.col(j) - col.eta).norm(), 0.0, 1e-10);
  }
}

TEST(Prox, GridRefinementConverges) {
  std::mt19937_64 rng(6);
  const ProxProblem p = random_s2(rng);
  const double coarse = solve_grid_oracle(p, 1.5, 0.1, 0).ell_at_eta;
  const double fine = solve_grid_oracle(p, 1.5, 0.05, 0).ell_at_eta;
  const double best = solve(p).ell_at_eta;
  EXPECT_GE(coarse, best - 1e-12);
  EXPECT_GE(fine, best - 1e-12);
  // Quadratic model around the minimizer: error ~ coeff/2 * (h/2)^2 * dim.
  EXPECT_LE(fine - best, 0.5 * p.coeff * 0.05 * 0.05 + 1e-12);
}

TEST(Prox, ResidualLowerBoundAtOrigin) {
  const Manifold M = Manifold::sphere(3);
  const ProxProblem p{M, Vector::Unit(3, 0), Vector::Unit(3, 1) * 5.0, 2.0, 0.1, 0.0};
  // The pulled-back subgradient along e2 is bounded by lambda.
  EXPECT_GE(stationarity_residual(p, Matrix::Zero(3, 1)), 5.0 - 0.1 - 1e-12);
}

TEST(Prox, FastPathSlotIsUsed) {
  const Manifold M = Manifold::sphere(3);
  const ProxProblem p{M, Vector::Unit(3, 0), Vector::Unit(3, 1), 2.0, 0.0, 0.0};
  ProxOptions opts;
  int calls = 0;
  opts.fast_path = [&calls](const ProxProblem& q) -> std::optional<Matrix> {
    ++calls;
    return Matrix(-q.g / q.coeff);
  };
  const ProxSolution s = solve(p, opts);
  EXPECT_EQ(calls, 1);
  EXPECT_NEAR(s.eta(1), -0.5, 1e-15);
}

TEST(Prox, Errors) {
  const Manifold M = Manifold::sphere(3);
  EXPECT_THROW(solve(ProxProblem{M, Vector::Unit(3, 0), Vector::Zero(3), 0.1, 0.5, 0.2}),
               InvalidParams);
  const Manifold big = Manifold::sphere(5);
  EXPECT_THROW(solve_grid_oracle(ProxProblem{big, Vector::Unit(5, 0), Vector::Zero(5), 1.0, 0.1, 0.0},
                                 1.0, 0.1),
               DimensionTooLarge);
}
