#include "rapg/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg {
namespace {

constexpr double kAntipodalTol = 1e-8;

// (cos t - sin t / t) / t^2, needed by the differential of Exp.
double cos_minus_sinc_over_t2(double t) {
  if (t < 1e-3) {
    const double t2 = t * t;
    return -1.0 / 3.0 + t2 / 30.0 - t2 * t2 / 840.0;
  }
  return (std::cos(t) - std::sin(t) / t) / (t * t);
}

void check_antipodal(double c) {
  if (c + 1.0 < kAntipodalTol) {
    std::ostringstream msg;
    msg << "geodesic is not unique, <x,y> = " << c;
    throw AntipodalPoints(msg.str());
  }
}

}  // namespace

double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

Manifold Manifold::sphere(Index n) {
  if (n < 2) throw InvalidParams("sphere needs n >= 2");
  return Manifold(ManifoldKind::kSphere, n, 1);
}

Manifold Manifold::oblique(Index n, Index p) {
  if (n < 2 || p < 1) throw InvalidParams("oblique manifold needs n >= 2, p >= 1");
  return Manifold(ManifoldKind::kOblique, n, p);
}

Manifold Manifold::euclidean(Index n) {
  if (n < 1) throw InvalidParams("euclidean space needs n >= 1");
  return Manifold(ManifoldKind::kEuclidean, n, 1);
}

Index Manifold::tangent_dim() const {
  return curved() ? (n_ - 1) * p_ : n_;
}

void Manifold::check_shape(const Matrix& a) const {
  if (a.rows() != n_ || a.cols() != p_) {
    std::ostringstream msg;
    msg << "expected " << n_ << "x" << p_ << ", got " << a.rows() << "x" << a.cols();
    throw ShapeMismatch(msg.str());
  }
}

bool Manifold::is_point(const Matrix& x, double tol) const {
  if (x.rows() != n_ || x.cols() != p_ || !x.allFinite()) return false;
  if (!curved()) return true;
  for (Index j = 0; j < p_; ++j) {
    if (std::abs(x.col(j).norm() - 1.0) > tol) return false;
  }
  return true;
}

bool Manifold::is_tangent(const Matrix& x, const Matrix& v, double tol) const {
  if (v.rows() != n_ || v.cols() != p_) return false;
  if (!curved()) return true;
  for (Index j = 0; j < p_; ++j) {
    if (std::abs(x.col(j).dot(v.col(j))) > tol) return false;
  }
  return true;
}

Matrix Manifold::normalize(const Matrix& x) const {
  check_shape(x);
  if (!curved()) return x;
  Matrix out = x;
  for (Index j = 0; j < p_; ++j) out.col(j) /= out.col(j).norm();
  return out;
}

Matrix Manifold::project_tangent(const Matrix& x, const Matrix& v) const {
  check_shape(x);
  check_shape(v);
  if (!curved()) return v;
  Matrix out = v;
  for (Index j = 0; j < p_; ++j) out.col(j) -= x.col(j).dot(v.col(j)) * x.col(j);
  return out;
}

Matrix Manifold::exp(const Matrix& x, const Matrix& eta) const {
  check_shape(x);
  check_shape(eta);
  if (!curved()) return x + eta;
  Matrix out(n_, p_);
  for (Index j = 0; j < p_; ++j) {
    const double t = eta.col(j).norm();
    const double c = t < 1e-8 ? 1.0 - 0.5 * t * t : std::cos(t);
    out.col(j) = c * x.col(j) + sinc(t) * eta.col(j);
    out.col(j) /= out.col(j).norm();
  }
  return out;
}

Matrix Manifold::log(const Matrix& x, const Matrix& y) const {
  check_shape(x);
  check_shape(y);
  if (!curved()) return y - x;
  Matrix out(n_, p_);
  for (Index j = 0; j < p_; ++j) {
    const double c = x.col(j).dot(y.col(j));
    check_antipodal(c);
    Vector v = y.col(j) - c * x.col(j);
    v -= x.col(j).dot(v) * x.col(j);
    const double nv = v.norm();
    const double theta = std::atan2(nv, c);
    out.col(j) = nv > 0.0 ? Vector(v * (theta / nv)) : Vector::Zero(n_);
  }
  return out;
}

Matrix Manifold::transport(const Matrix& x, const Matrix& y, const Matrix& v) const {
  check_shape(x);
  check_shape(y);
  check_shape(v);
  if (!curved()) return v;
  Matrix out(n_, p_);
  for (Index j = 0; j < p_; ++j) {
    const double c = x.col(j).dot(y.col(j));
    check_antipodal(c);
    // Closed form of transport along the great circle through x and y.
    out.col(j) = v.col(j) - (y.col(j).dot(v.col(j)) / (1.0 + c)) * (x.col(j) + y.col(j));
  }
  return out;
}

Matrix Manifold::d_exp(const Matrix& x, const Matrix& eta, const Matrix& v) const {
  check_shape(x);
  check_shape(eta);
  check_shape(v);
  if (!curved()) return v;
  Matrix out(n_, p_);
  for (Index j = 0; j < p_; ++j) {
    const double t = eta.col(j).norm();
    const double s = sinc(t);
    const double ev = eta.col(j).dot(v.col(j));
    out.col(j) = s * v.col(j) - s * ev * x.col(j) + cos_minus_sinc_over_t2(t) * ev * eta.col(j);
  }
  return out;
}

Matrix Manifold::d_exp_adjoint(const Matrix& x, const Matrix& eta, const Matrix& w) const {
  check_shape(x);
  check_shape(eta);
  check_shape(w);
  if (!curved()) return w;
  const Matrix z = exp(x, eta);
  const Matrix wz = project_tangent(z, w);
  Matrix out(n_, p_);
  for (Index j = 0; j < p_; ++j) {
    const double t = eta.col(j).norm();
    const double s = sinc(t);
    const double coef = cos_minus_sinc_over_t2(t) * eta.col(j).dot(wz.col(j)) -
                        s * x.col(j).dot(wz.col(j));
    Vector r = s * wz.col(j) + coef * eta.col(j);
    r -= x.col(j).dot(r) * x.col(j);
    out.col(j) = r;
  }
  return out;
}

double Manifold::inner(const Matrix& v, const Matrix& w) const {
  check_shape(v);
  check_shape(w);
  return (v.array() * w.array()).sum();
}

double Manifold::norm(const Matrix& v) const {
  check_shape(v);
  return v.norm();
}

double Manifold::dist(const Matrix& x, const Matrix& y) const {
  check_shape(x);
  check_shape(y);
  if (!curved()) return (y - x).norm();
  double sq = 0.0;
  for (Index j = 0; j < p_; ++j) {
    const double c = x.col(j).dot(y.col(j));
    check_antipodal(c);
    const double theta = std::atan2((y.col(j) - c * x.col(j)).norm(), c);
    sq += theta * theta;
  }
  return std::sqrt(sq);
}

Matrix Manifold::random_point(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  Matrix x(n_, p_);
  for (Index j = 0; j < p_; ++j)
    for (Index i = 0; i < n_; ++i) x(i, j) = normal(rng);
  return curved() ? normalize(x) : x;
}

Matrix Manifold::random_tangent(const Matrix& x, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  Matrix v(n_, p_);
  for (Index j = 0; j < p_; ++j)
    for (Index i = 0; i < n_; ++i) v(i, j) = normal(rng);
  return project_tangent(x, v);
}

CurvatureProfile curvature_constants(double kappa_min, double kappa_max, double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw DomainError("diameter must be positive and finite");
  if (kappa_min > kappa_max) throw DomainError("kappa_min exceeds kappa_max");
  CurvatureProfile out;
  out.kappa_min = kappa_min;
  out.kappa_max = kappa_max;
  out.diameter = D;
  if (kappa_min < 0.0) {
    const double a = std::sqrt(-kappa_min) * D;
    out.zeta = a / std::tanh(a);
  }
  if (kappa_max > 0.0) {
    const double b = std::sqrt(kappa_max) * D;
    if (b >= std::numbers::pi) {
      throw DomainError("diameter must be below pi / sqrt(kappa_max)");
    }
    out.delta = b / std::tan(b);
  }
  return out;
}

double sectional_curvature_oblique(const Matrix& x, const Matrix& u, const Matrix& v) {
  if (u.rows() != x.rows() || u.cols() != x.cols() || v.rows() != x.rows() ||
      v.cols() != x.cols()) {
    throw ShapeMismatch("u, v and x must share a shape");
  }
  constexpr double tol = 1e-8;
  const double nu = u.norm();
  const double nv = v.norm();
  const double uv = (u.array() * v.array()).sum();
  if (std::abs(nu - 1.0) > tol || std::abs(nv - 1.0) > tol || std::abs(uv) > tol) {
    throw NotOrthonormal("u and v must be orthonormal");
  }
  double k = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    if (std::abs(x.col(j).dot(u.col(j))) > tol || std::abs(x.col(j).dot(v.col(j))) > tol) {
      throw NotOrthonormal("u and v must be tangent at x");
    }
    const double a = u.col(j).squaredNorm();
    const double b = v.col(j).squaredNorm();
    const double c = u.col(j).dot(v.col(j));
    k += a * b - c * c;
  }
  return k;
}

}  // namespace rapg
