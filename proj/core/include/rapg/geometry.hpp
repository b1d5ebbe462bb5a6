#pragma once

#include <Eigen/Dense>
#include <random>

namespace rapg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ManifoldKind { kSphere, kOblique, kEuclidean };

/// Unit sphere S^{n-1}, oblique manifold (n x p, unit columns) or R^n.
///
/// Points and tangent vectors are dense n x p matrices (p = 1 for the
/// sphere and Euclidean space). Every operation is a pure function.
class Manifold {
 public:
  static Manifold sphere(Index n);
  static Manifold oblique(Index n, Index p);
  static Manifold euclidean(Index n);

  ManifoldKind kind() const { return kind_; }
  Index rows() const { return n_; }
  Index cols() const { return p_; }
  Index ambient_dim() const { return n_ * p_; }
  Index tangent_dim() const;
  bool curved() const { return kind_ != ManifoldKind::kEuclidean; }

  /// Throws ShapeMismatch unless `a` is rows() x cols().
  void check_shape(const Matrix& a) const;
  bool is_point(const Matrix& x, double tol = 1e-12) const;
  bool is_tangent(const Matrix& x, const Matrix& v, double tol = 1e-10) const;

  /// Unit-normalizes columns on curved manifolds; identity on R^n.
  Matrix normalize(const Matrix& x) const;
  Matrix project_tangent(const Matrix& x, const Matrix& v) const;

  Matrix exp(const Matrix& x, const Matrix& eta) const;
  /// Throws AntipodalPoints when <x,y> + 1 < 1e-8 in some column.
  Matrix log(const Matrix& x, const Matrix& y) const;
  /// Parallel transport of v in T_x along the minimizing geodesic to y.
  Matrix transport(const Matrix& x, const Matrix& y, const Matrix& v) const;
  /// Differential of Exp_x at eta applied to v in T_x.
  Matrix d_exp(const Matrix& x, const Matrix& eta, const Matrix& v) const;
  /// Adjoint of d_exp: maps w (projected onto T_{Exp_x(eta)}) back to T_x.
  Matrix d_exp_adjoint(const Matrix& x, const Matrix& eta, const Matrix& w) const;

  double inner(const Matrix& v, const Matrix& w) const;
  double norm(const Matrix& v) const;
  double dist(const Matrix& x, const Matrix& y) const;

  Matrix random_point(std::mt19937_64& rng) const;
  /// Gaussian tangent vector at x (not normalized).
  Matrix random_tangent(const Matrix& x, std::mt19937_64& rng) const;

 private:
  Manifold(ManifoldKind kind, Index n, Index p) : kind_(kind), n_(n), p_(p) {}
  ManifoldKind kind_;
  Index n_;
  Index p_;
};

struct CurvatureProfile {
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double diameter = 0.0;
  double zeta = 1.0;
  double delta = 1.0;
};

/// Distortion constants zeta >= 1 >= delta of a domain with diameter D.
/// Throws DomainError if D <= 0 or D >= pi / sqrt(kappa_max).
CurvatureProfile curvature_constants(double kappa_min, double kappa_max, double D);

/// Sectional curvature of the oblique manifold at x for orthonormal u, v.
double sectional_curvature_oblique(const Matrix& x, const Matrix& u, const Matrix& v);

/// sin(t)/t and cos(t) with a Taylor fallback below 1e-8.
double sinc(double t);

}  // namespace rapg
