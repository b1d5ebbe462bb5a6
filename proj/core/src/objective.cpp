#include "rapg/objective.hpp"

#include <algorithm>
#include <cmath>

#include "rapg/errors.hpp"

namespace rapg {

SpcaSphere::SpcaSphere(Matrix A)
    : A_(std::move(A)), manifold_(Manifold::sphere(A_.cols())) {}

double SpcaSphere::value(const Matrix& x) const {
  manifold_.check_shape(x);
  return -(A_ * x).squaredNorm();
}

Matrix SpcaSphere::riem_grad(const Matrix& x) const {
  manifold_.check_shape(x);
  // A^T (A x) costs O(mn) instead of O(n^2) with a cached Gram matrix.
  const Matrix egrad = -2.0 * (A_.transpose() * (A_ * x));
  return manifold_.project_tangent(x, egrad);
}

SpcaOblique::SpcaOblique(Matrix A, Vector d2)
    : A_(std::move(A)), d2_(std::move(d2)), manifold_(Manifold::oblique(A_.cols(), d2_.size())) {}

double SpcaOblique::value(const Matrix& x) const {
  manifold_.check_shape(x);
  const Matrix ax = A_ * x;
  Matrix r = ax.transpose() * ax;
  r.diagonal() -= d2_;
  return r.squaredNorm();
}

Matrix SpcaOblique::riem_grad(const Matrix& x) const {
  manifold_.check_shape(x);
  const Matrix ax = A_ * x;
  Matrix r = ax.transpose() * ax;
  r.diagonal() -= d2_;
  const Matrix egrad = 4.0 * (A_.transpose() * (ax * r));
  return manifold_.project_tangent(x, egrad);
}

LeastSquares::LeastSquares(Matrix B, Vector b)
    : B_(std::move(B)), b_(std::move(b)), manifold_(Manifold::euclidean(B_.cols())) {
  if (B_.rows() != b_.size()) throw ShapeMismatch("B rows must match b");
}

double LeastSquares::value(const Matrix& x) const {
  manifold_.check_shape(x);
  return 0.5 * (B_ * x - b_).squaredNorm();
}

Matrix LeastSquares::riem_grad(const Matrix& x) const {
  manifold_.check_shape(x);
  return B_.transpose() * (B_ * x - b_);
}

SquaredDistance::SquaredDistance(Manifold manifold, Matrix anchor)
    : manifold_(manifold), anchor_(std::move(anchor)) {
  manifold_.check_shape(anchor_);
}

double SquaredDistance::value(const Matrix& x) const {
  const double d = manifold_.dist(x, anchor_);
  return 0.5 * d * d;
}

Matrix SquaredDistance::riem_grad(const Matrix& x) const {
  return -manifold_.log(x, anchor_);
}

double h_l1_value(double lambda, const Matrix& x) {
  return lambda == 0.0 ? 0.0 : lambda * x.cwiseAbs().sum();
}

Matrix l1_subgradient(double lambda, const Matrix& x) {
  return x.unaryExpr([lambda](double v) { return v > 0.0 ? lambda : (v < 0.0 ? -lambda : 0.0); });
}

ConvexityReport check_retraction_convexity(const Manifold& manifold, double lambda,
                                           const Matrix& x, double radius, double rho,
                                           const ConvexityProbeOptions& options) {
  if (!(radius > 0.0) || radius >= M_PI / 2) throw DomainError("radius must lie in (0, pi/2)");
  if (rho < 0.0) throw DomainError("rho must be nonnegative");
  manifold.check_shape(x);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto h_pull = [&](const Matrix& eta) { return h_l1_value(lambda, manifold.exp(x, eta)); };

  ConvexityReport report;
  for (int i = 0; i < options.directions; ++i) {
    Matrix d = manifold.random_tangent(x, rng);
    d /= manifold.norm(d);
    // Half of the segments pass through the origin, where concavity of the
    // pulled-back l1 norm is strongest.
    Matrix c = Matrix::Zero(x.rows(), x.cols());
    if (i % 2 == 1) {
      Matrix e = manifold.random_tangent(x, rng);
      c = e / manifold.norm(e) * (0.5 * radius * unif(rng));
    }
    const double reach = radius - manifold.norm(c);
    for (int j = 1; j <= options.radii; ++j) {
      const double r = reach * j / options.radii;
      const Matrix omega = c - r * d;
      const Matrix eta = c + r * d;
      const double h0 = h_pull(omega);
      const double h1 = h_pull(eta);
      for (int k = 1; k <= options.segment_points; ++k) {
        const double t = static_cast<double>(k) / (options.segment_points + 1);
        const Matrix mid = c + (2.0 * t - 1.0) * r * d;
        const double gap = h_pull(mid) - (1.0 - t) * h0 - t * h1;
        const double curv = 0.5 * t * (1.0 - t) * 4.0 * r * r;
        const double tol = 1e-13 * (1.0 + std::abs(h0) + std::abs(h1));
        ++report.samples;
        const double violation = gap - rho * curv;
        report.max_violation = std::max(report.max_violation, violation);
        if (violation > tol) ++report.violations;
        if (gap > tol) report.rho_hat = std::max(report.rho_hat, gap / curv);
      }
    }
  }
  return report;
}

bool midpoint_concavity_check(double lambda, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw ShapeMismatch("x and y must have equal length");
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) * y(i) < 0.0) throw NotSameOrthant("coordinates of opposite sign");
  }
  if ((x - y).norm() == 0.0) throw DomainError("x and y must differ");
  const Vector s = x + y;
  const Vector mid = s / s.norm();
  return h_l1_value(lambda, mid) > 0.5 * (h_l1_value(lambda, x) + h_l1_value(lambda, y));
}

}  // namespace rapg
