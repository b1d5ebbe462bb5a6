#include <cmath>

#include <gtest/gtest.h>

#include "rapg/bench/data.hpp"
#include "rapg/errors.hpp"
#include "rapg/objective.hpp"

using namespace rapg;

namespace {

// Directional derivative of f along the geodesic t -> Exp_x(t v).
double fd_directional(const SmoothFunction& f, const Matrix& x, const Matrix& v, double h = 1e-6) {
  const Manifold& M = f.manifold();
  return (f.value(M.exp(x, h * v)) - f.value(M.exp(x, -h * v))) / (2 * h);
}

void expect_gradient_matches(const SmoothFunction& f, std::uint64_t seed) {
  const Manifold& M = f.manifold();
  std::mt19937_64 rng(seed);
  const Matrix x = M.random_point(rng);
  const Matrix g = f.riem_grad(x);
  EXPECT_TRUE(M.is_tangent(x, g, 1e-9));
  for (int t = 0; t < 10; ++t) {
    const Matrix v = M.random_tangent(x, rng).normalized();
    const double exact = M.inner(g, v);
    EXPECT_NEAR(fd_directional(f, x, v), exact, 1e-5 * (1 + std::abs(exact)));
  }
}

}  // namespace

TEST(Objective, SpcaSphereValueAndCriticalPoint) {
  const SpcaSphere f(Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(f.value(Vector::Unit(2, 0)), -1.0);

  Matrix A(2, 3);
  A << 3, 1, 0, 1, 2, 1;
  const SpcaSphere g(A);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A);
  const Vector v = es.eigenvectors().col(2);
  EXPECT_NEAR(g.riem_grad(v).norm(), 0.0, 1e-12);
  EXPECT_NEAR(g.value(v), -es.eigenvalues()(2), 1e-12);
}

TEST(Objective, SpcaSphereGradientFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  Matrix A(5, 12);
  for (Index i = 0; i < A.size(); ++i) A(i) = N(rng);
  expect_gradient_matches(SpcaSphere(A), 21);
}

TEST(Objective, SpcaObliqueMinimizerAndScaling) {
  const bench::ObliqueData d = bench::gen_spca_oblique_data(8, 20, 3, 5);
  const SpcaOblique f(d.A, d.d2);
  EXPECT_NEAR(f.value(d.V), 0.0, 1e-20);
  EXPECT_NEAR(f.riem_grad(d.V).norm(), 0.0, 1e-10);

  const SpcaOblique f0(d.A, Vector::Zero(3));
  std::mt19937_64 rng(1);
  const Matrix X = f0.manifold().random_point(rng);
  const Matrix Gm = X.transpose() * d.A.transpose() * d.A * X;
  EXPECT_NEAR(f0.value(X), Gm.squaredNorm(), 1e-12 * Gm.squaredNorm());
}

TEST(Objective, SpcaObliqueGradientFiniteDifferences) {
  const bench::ObliqueData d = bench::gen_spca_oblique_data(6, 15, 3, 9);
  expect_gradient_matches(SpcaOblique(d.A, d.d2), 22);
}

TEST(Objective, LeastSquaresAndSquaredDistanceGradients) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  Matrix B(4, 6);
  Vector b(4);
  for (Index i = 0; i < B.size(); ++i) B(i) = N(rng);
  for (Index i = 0; i < b.size(); ++i) b(i) = N(rng);
  expect_gradient_matches(LeastSquares(B, b), 23);

  const Manifold S = Manifold::sphere(4);
  const Matrix anchor = S.random_point(rng);
  const SquaredDistance sd(S, anchor);
  expect_gradient_matches(sd, 24);
  EXPECT_NEAR(sd.value(anchor), 0.0, 1e-30);
}

TEST(Objective, L1Value) {
  EXPECT_DOUBLE_EQ(h_l1_value(1.0, Vector::Unit(3, 0)), 1.0);
  EXPECT_NEAR(h_l1_value(2.0, Vector::Constant(2, 1 / std::sqrt(2.0))), 2 * std::sqrt(2.0), 1e-15);
  const Manifold S = Manifold::sphere(7);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) EXPECT_GE(h_l1_value(0.3, S.random_point(rng)), 0.3 - 1e-15);
  Vector x(3);
  x << -2, 0, 5;
  EXPECT_EQ(l1_subgradient(0.5, x), Vector(Eigen::Vector3d(-0.5, 0, 0.5)));
}

TEST(Objective, RetractionConvexityProbe) {
  const Manifold S = Manifold::sphere(3);
  const Vector x = Vector::Constant(3, 1 / std::sqrt(3.0));
  const ConvexityReport zero = check_retraction_convexity(S, 0.0, x, 0.3, 0.0);
  EXPECT_EQ(zero.violations, 0);
  EXPECT_EQ(zero.samples, 64L * 16 * 9);

  const ConvexityReport concave = check_retraction_convexity(S, 1.0, x, 0.1, 0.0);
  EXPECT_GT(concave.violations, 0);
  // The second derivative of <sign, Exp_x(t d)> at t = 0 is -<sign, x> = -sqrt(3).
  EXPECT_GT(concave.rho_hat, 1.5);
  EXPECT_LT(concave.rho_hat, 2.0);

  Vector y(3);
  y << 1, 2, 3;
  EXPECT_EQ(check_retraction_convexity(S, 1e-4, y.normalized(), 0.1, 0.002).violations, 0);
  EXPECT_THROW(check_retraction_convexity(S, 1.0, x, 2.0, 0.0), DomainError);
}

TEST(Objective, MidpointConcavity) {
  EXPECT_TRUE(midpoint_concavity_check(1.0, Vector::Unit(2, 0), Vector::Unit(2, 1)));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.01, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Vector a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      const double s = i % 2 ? -1.0 : 1.0;
      a(i) = s * U(rng);
      b(i) = s * U(rng);
    }
    EXPECT_TRUE(midpoint_concavity_check(0.7, a.normalized(), b.normalized()));
  }
  const Vector x = Vector::Constant(3, 1 / std::sqrt(3.0));
  EXPECT_THROW(midpoint_concavity_check(1.0, x, x), DomainError);
  EXPECT_THROW(midpoint_concavity_check(1.0, x, -x), NotSameOrthant);
}
