#pragma once

#include <cstdint>
#include <memory>

#include "rapg/geometry.hpp"

namespace rapg {

/// Smooth part f of F = f + h with its Riemannian gradient.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual const Manifold& manifold() const = 0;
  virtual double value(const Matrix& x) const = 0;
  virtual Matrix riem_grad(const Matrix& x) const = 0;
};

/// f1(x) = -x^T A^T A x on the sphere.
class SpcaSphere final : public SmoothFunction {
 public:
  explicit SpcaSphere(Matrix A);
  const Manifold& manifold() const override { return manifold_; }
  double value(const Matrix& x) const override;
  Matrix riem_grad(const Matrix& x) const override;
  const Matrix& A() const { return A_; }

 private:
  Matrix A_;
  Manifold manifold_;
};

/// f2(X) = ||X^T A^T A X - D^2||_F^2 on the oblique manifold.
class SpcaOblique final : public SmoothFunction {
 public:
  /// `d2` holds the diagonal of D^2.
  SpcaOblique(Matrix A, Vector d2);
  const Manifold& manifold() const override { return manifold_; }
  double value(const Matrix& x) const override;
  Matrix riem_grad(const Matrix& x) const override;
  const Matrix& A() const { return A_; }
  const Vector& d2() const { return d2_; }

 private:
  Matrix A_;
  Vector d2_;
  Manifold manifold_;
};

/// 0.5 ||B x - b||^2 on R^n.
class LeastSquares final : public SmoothFunction {
 public:
  LeastSquares(Matrix B, Vector b);
  const Manifold& manifold() const override { return manifold_; }
  double value(const Matrix& x) const override;
  Matrix riem_grad(const Matrix& x) const override;

 private:
  Matrix B_;
  Vector b_;
  Manifold manifold_;
};

/// 0.5 dist(x, anchor)^2 on any manifold.
class SquaredDistance final : public SmoothFunction {
 public:
  SquaredDistance(Manifold manifold, Matrix anchor);
  const Manifold& manifold() const override { return manifold_; }
  double value(const Matrix& x) const override;
  Matrix riem_grad(const Matrix& x) const override;

 private:
  Manifold manifold_;
  Matrix anchor_;
};

double h_l1_value(double lambda, const Matrix& x);
/// lambda * sign(x), with 0 at zero entries.
Matrix l1_subgradient(double lambda, const Matrix& x);

/// F = f + lambda ||x||_1.
struct CompositeObjective {
  std::shared_ptr<const SmoothFunction> f;
  double lambda = 0.0;

  const Manifold& manifold() const { return f->manifold(); }
  double value(const Matrix& x) const { return f->value(x) + h_l1_value(lambda, x); }
  double h(const Matrix& x) const { return h_l1_value(lambda, x); }
};

struct ConvexityProbeOptions {
  int directions = 64;
  int radii = 16;
  int segment_points = 9;
  std::uint64_t seed = 7;
};

struct ConvexityReport {
  double max_violation = 0.0;  // with the supplied rho
  long violations = 0;
  long samples = 0;
  /// Smallest rho under which every sampled segment is convex.
  double rho_hat = 0.0;
};

/// Samples segments in the tangent ball at x and tests convexity of
/// eta -> lambda ||Exp_x(eta)||_1 + rho/2 ||eta||^2 along them.
ConvexityReport check_retraction_convexity(const Manifold& manifold, double lambda,
                                           const Matrix& x, double radius, double rho,
                                           const ConvexityProbeOptions& options = {});

/// True iff h at the geodesic midpoint of x, y exceeds the average of h(x), h(y).
/// Throws NotSameOrthant if some coordinate has opposite signs.
bool midpoint_concavity_check(double lambda, const Vector& x, const Vector& y);

}  // namespace rapg
