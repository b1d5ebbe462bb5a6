#include "rapg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rapg/errors.hpp"
#include "rapg/objective.hpp"

namespace rapg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double soft(double v, double a) {
  return v > a ? v - a : (v < -a ? v + a : 0.0);
}

// First-order model of Exp_y around eta on one sphere column.
// J = DExp_y(eta) maps u -> up and the complement of {y, u} -> s * identity.
struct Linearization {
  Vector z, u, up, b, bp;
  double t = 0.0, s = 1.0;
};

Linearization linearize(const Vector& y, const Vector& g, double c, const Vector& eta) {
  Linearization lin;
  lin.t = eta.norm();
  lin.s = sinc(lin.t);
  const double cos_t = lin.t < 1e-8 ? 1.0 - 0.5 * lin.t * lin.t : std::cos(lin.t);
  lin.z = cos_t * y + lin.s * eta;
  lin.z /= lin.z.norm();
  lin.u = lin.t > 0.0 ? Vector(eta / lin.t) : Vector::Zero(y.size());
  lin.up = cos_t * lin.u - std::sin(lin.t) * y;
  lin.b = g + c * eta;
  // bp = J^{-T} b, the gradient of the smooth part expressed at z.
  const double bu = lin.b.dot(lin.u);
  lin.bp = bu * lin.up + (lin.b - bu * lin.u) / lin.s;
  lin.bp -= lin.z.dot(lin.bp) * lin.z;
  return lin;
}

// J^T w for w tangent at z.
Vector apply_jt(const Linearization& lin, const Vector& w) {
  const double wp = w.dot(lin.up);
  return wp * lin.u + lin.s * (w - wp * lin.up);
}

// J w for w tangent at y.
Vector apply_j(const Linearization& lin, const Vector& w) {
  const double wu = w.dot(lin.u);
  return wu * lin.up + lin.s * (w - wu * lin.u);
}

// J^{-1} v for v tangent at z.
Vector apply_j_inv(const Linearization& lin, const Vector& v) {
  const double vp = v.dot(lin.up);
  return vp * lin.u + (v - vp * lin.up) / lin.s;
}

struct SubSolution {
  Vector v;      // w - z for w = argmin over <z,w> = 1 of lambda ||w||_1 + K/2 ||w - z + q||^2
  Vector sigma;  // subgradient certificate of ||.||_1 at w, entries in [-1, 1]
};

// Solves the sphere-tangent-plane l1 problem through its scalar multiplier.
// Works with the displacement w - z throughout: near a fixed point it is far
// smaller than z and forming w first would bury it in rounding.
SubSolution solve_tangent_plane_l1(const Vector& q, const Vector& z, double lambda, double K) {
  const double a = lambda / K;
  auto disp = [&](Index i, double m) {
    const double u = z(i) - q(i) - m * z(i);
    if (u > a) return -q(i) - m * z(i) - a;
    if (u < -a) return -q(i) - m * z(i) + a;
    return -z(i);
  };
  auto phi = [&](double m, double* slope, double* noise) {
    double val = 0.0, sl = 0.0, mag = 0.0;
    for (Index i = 0; i < q.size(); ++i) {
      const double v = disp(i, m);
      val += z(i) * v;
      mag += std::abs(z(i)) * (std::abs(q(i)) + std::abs(m * z(i)) + a);
      if (v != -z(i)) sl -= z(i) * z(i);
    }
    *slope = sl;
    *noise = 4.0 * kEps * mag;
    return val;
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo = -inf, hi = inf;
  double m = -z.dot(q) - a * z.cwiseAbs().sum();
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0, noise = 0.0;
    const double val = phi(m, &slope, &noise);
    if (std::abs(val) <= noise) break;
    if (val > 0.0) lo = m; else hi = m;
    if (std::isfinite(lo) && std::isfinite(hi) &&
        hi - lo <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) {
      break;
    }
    double next = slope < 0.0 ? m - val / slope : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) {
      if (std::isfinite(lo) && std::isfinite(hi)) {
        next = 0.5 * (lo + hi);
      } else if (std::isfinite(lo)) {
        next = lo + 2.0 * (1.0 + std::abs(lo));
      } else {
        next = hi - 2.0 * (1.0 + std::abs(hi));
      }
    }
    m = next;
  }

  SubSolution out;
  out.v.resize(q.size());
  out.sigma.resize(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    const double u = z(i) - q(i) - m * z(i);
    out.v(i) = disp(i, m);
    if (u > a) out.sigma(i) = 1.0;
    else if (u < -a) out.sigma(i) = -1.0;
    else out.sigma(i) = a > 0.0 ? std::clamp(u / a, -1.0, 1.0) : 0.0;
  }
  return out;
}

// ||x + dx||_1 - ||x||_1 without cancellation where no sign changes.
double l1_change(const Vector& x, const Vector& dx) {
  double out = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double x0 = x(i), x1 = x0 + dx(i);
    out += (x0 > 0.0 && x1 >= 0.0) || (x0 < 0.0 && x1 <= 0.0) ? std::copysign(1.0, x0) * dx(i)
                                                               : std::abs(x1) - std::abs(x0);
  }
  return out;
}

// Residual of b + lambda J^T P_z sigma where sigma follows sign(z) off the
// near-zero set and the certificate on it. Optionally polished by FISTA.
double column_residual(const Linearization& lin, double lambda, const Vector& certificate,
                       double zero_tol, int polish_iters) {
  if (lambda == 0.0) return lin.b.norm();
  const Index n = lin.z.size();
  std::vector<Index> box;
  Vector sigma(n);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(lin.z(i)) > zero_tol) {
      sigma(i) = lin.z(i) > 0.0 ? 1.0 : -1.0;
    } else {
      sigma(i) = std::clamp(certificate(i), -1.0, 1.0);
      box.push_back(i);
    }
  }
  auto residual_vec = [&](const Vector& s) {
    Vector ps = s - lin.z.dot(s) * lin.z;
    return Vector(lin.b + lambda * apply_jt(lin, ps));
  };
  Vector r = residual_vec(sigma);
  double best = r.norm();
  if (box.empty() || polish_iters <= 0) return best;

  // Projected accelerated gradient on the box coordinates.
  Vector x = sigma, prev = sigma, ext = sigma;
  double tk = 1.0;
  const double step = 1.0 / (lambda * lambda);
  for (int it = 0; it < polish_iters; ++it) {
    const Vector re = residual_vec(ext);
    Vector grad = lambda * apply_j(lin, re);
    grad -= lin.z.dot(grad) * lin.z;
    prev = x;
    x = ext;
    for (Index i : box) x(i) = std::clamp(ext(i) - step * grad(i), -1.0, 1.0);
    const double val = residual_vec(x).norm();
    if (val < best) best = val;
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    ext = x + ((tk - 1.0) / tn) * (x - prev);
    tk = tn;
    if (best == 0.0) break;
  }
  return best;
}

Vector column_exp(const Vector& y, const Vector& eta) {
  const double t = eta.norm();
  const double cos_t = t < 1e-8 ? 1.0 - 0.5 * t * t : std::cos(t);
  Vector z = cos_t * y + sinc(t) * eta;
  return z / z.norm();
}

Vector column_log(const Vector& y, const Vector& x) {
  Vector v = x - y.dot(x) * y;
  const double s = v.norm();
  if (s == 0.0) return Vector::Zero(y.size());
  return (std::atan2(s, y.dot(x)) / s) * v;
}

// sinc(t2) - sinc(t1) given D = t2^2 - t1^2, free of cancellation.
double sinc_diff(double t1, double t2, double D) {
  const double a = t2 * t2, b = t1 * t1;
  if (std::max(t1, t2) < 0.5) {
    // sinc t = sum_k (-1)^k t^{2k} / (2k+1)!, and a^k - b^k = D sum_j a^j b^{k-1-j}.
    double sum = 0.0, fact = 1.0, sign = -1.0;
    for (int k = 1; k <= 8; ++k) {
      fact *= (2.0 * k) * (2.0 * k + 1.0);
      double geo = 0.0;
      for (int j = 0; j < k; ++j) geo += std::pow(a, j) * std::pow(b, k - 1 - j);
      sum += sign * geo / fact;
      sign = -sign;
    }
    return D * sum;
  }
  const double dt = D / (t1 + t2);
  if (std::abs(dt) > 1e-3) return sinc(t2) - sinc(t1);
  // Taylor in dt around t1, derivatives from (t sinc)'' = -t sinc.
  const double s0 = sinc(t1);
  const double s1 = (t1 * std::cos(t1) - std::sin(t1)) / (t1 * t1);
  const double s2 = -s0 - 2.0 * s1 / t1;
  const double s3 = (-s0 - t1 * s1 - 3.0 * s2) / t1;
  const double s4 = (-2.0 * s1 - t1 * s2 - 4.0 * s3) / t1;
  return dt * (s1 + dt * (s2 / 2.0 + dt * (s3 / 6.0 + dt * s4 / 24.0)));
}

// Exp_y(from + d) - Exp_y(from) evaluated without subtracting the two points.
Vector column_exp_change(const Vector& y, const Vector& from, const Vector& d) {
  const double D = d.dot(2.0 * from + d);
  const double t1 = from.norm(), t2 = (from + d).norm();
  const double half_dt = t1 + t2 > 0.0 ? 0.5 * D / (t1 + t2) : 0.0;
  const double dcos = -2.0 * std::sin(0.5 * (t1 + t2)) * std::sin(half_dt);
  return dcos * y + sinc(t2) * d + sinc_diff(t1, t2, D) * from;
}

// l(to) - l(from), accurate even when the change is far below the rounding
// error of l itself. `noise` receives a bound on the remaining error.
double column_ell_change(const Vector& y, const Vector& g, double c, double lambda,
                         const Vector& from, const Vector& x_from, const Vector& to,
                         double* noise) {
  // Only tangent parts matter. Rounding leaves normal components of size
  // eps |eta| in the iterates; projecting the difference rather than the two
  // endpoints keeps that out of the change, where the l1 term would see it.
  const Vector f = from - y.dot(from) * y;
  Vector d = to - from;
  d -= y.dot(d) * y;
  const Vector dx = column_exp_change(y, f, d);
  const double lin = g.dot(d);
  const double quad = 0.5 * c * d.dot(2.0 * f + d);
  const double l1 = l1_change(x_from, dx);
  if (noise) {
    // Entries at a kink are zero only up to the rounding of Exp, so |x_i|
    // there is known to about eps and cannot certify a change.
    double kink = 0.0;
    for (Index i = 0; i < x_from.size(); ++i) {
      const double a = std::abs(x_from(i)), b = std::abs(x_from(i) + dx(i));
      if (std::min(a, b) <= 8.0 * kEps) kink += a + b + 8.0 * kEps;
    }
    *noise = 8.0 * kEps * (std::abs(lin) + std::abs(quad) + lambda * dx.lpNorm<1>()) + lambda * kink;
  }
  return lin + quad + lambda * l1;
}

struct ColumnResult {
  Vector eta;
  double residual = 0.0;
  int iters = 0;
  ProxStatus status = ProxStatus::kConverged;
};

// Prox-linear iteration: linearize Exp at eta, solve the l1 problem on the
// tangent plane at z = Exp_y(eta) with a curvature-safe quadratic, pull back.
ColumnResult solve_sphere_column(const Vector& y, const Vector& g, double c, double lambda,
                                 double tol, const ProxOptions& opt) {
  ColumnResult res;
  const Index n = y.size();
  if (lambda == 0.0) {
    res.eta = -g / c;
    res.residual = 0.0;
    res.iters = 1;
    return res;
  }
  Vector eta = Vector::Zero(n);
  Vector x_cur = y;
  double omega = 1.0;
  res.status = ProxStatus::kMaxIters;
  double last_residual = std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    const Linearization lin = linearize(y, g, c, eta);
    const double s2 = lin.s * lin.s;
    bool first = true;
    bool accepted = false;
    for (int tries = 0; tries < 80; ++tries) {
      const double K = omega * c / s2;
      const SubSolution sub = solve_tangent_plane_l1(lin.bp / K, lin.z, lambda, K);
      if (first) {
        last_residual = column_residual(lin, lambda, sub.sigma, opt.zero_tol, 0);
        first = false;
        if (last_residual <= tol) break;
      }
      Vector v = sub.v - lin.z.dot(sub.v) * lin.z;
      Vector d = apply_j_inv(lin, v);
      d -= y.dot(d) * y;
      const double model_change =
          lin.bp.dot(v) + 0.5 * K * v.squaredNorm() + lambda * l1_change(lin.z, v);
      auto attempt = [&](Vector eta_new) {
        const double nrm = eta_new.norm();
        const bool clipped = nrm > opt.ball_radius;
        if (clipped) eta_new *= opt.ball_radius / nrm;
        double noise = 0.0;
        const double change = column_ell_change(y, g, c, lambda, eta, x_cur, eta_new, &noise);
        const bool ok = clipped ? change < 0.0
                                : (change <= model_change + noise && change <= noise);
        if (ok) {
          accepted = (eta_new - eta).norm() > 1e-16 * (1.0 + eta.norm());
          eta = eta_new;
          x_cur = column_exp(y, eta);
        }
        return ok;
      };
      // The tangent-plane step keeps coordinates it zeroes at zero only to
      // first order; Exp bends them off the kink. Snap them back first.
      const Vector w = lin.z + sub.v;
      Vector x_snap = column_exp(y, eta + d);
      bool snapped = false;
      for (Index i = 0; i < n; ++i) {
        if (w(i) == 0.0 && x_snap(i) != 0.0) {
          x_snap(i) = 0.0;
          snapped = true;
        }
      }
      if (snapped && x_snap.norm() > 0.0 && attempt(column_log(y, x_snap / x_snap.norm()))) break;
      if (attempt(eta + d)) break;
      omega *= 2.0;
    }
    if (last_residual <= tol) {
      res.status = ProxStatus::kConverged;
      break;
    }
    if (!accepted) {
      res.status = ProxStatus::kStagnated;
      break;
    }
    omega = std::max(1.0, 0.5 * omega);
  }
  res.iters = it;
  res.eta = eta;
  if (res.status != ProxStatus::kConverged) {
    const Linearization lin = linearize(y, g, c, eta);
    const double K = c / (lin.s * lin.s);
    const SubSolution sub = solve_tangent_plane_l1(lin.bp / K, lin.z, lambda, K);
    res.residual = column_residual(lin, lambda, sub.sigma, opt.zero_tol, 200);
    if (res.residual <= tol) res.status = ProxStatus::kConverged;
  } else {
    res.residual = last_residual;
  }
  return res;
}

Matrix euclidean_prox(const ProxProblem& p) {
  const Matrix target = p.y - p.g / p.coeff;
  const double a = p.lambda / p.coeff;
  return target.unaryExpr([a](double v) { return soft(v, a); }) - p.y;
}

double euclidean_residual(const ProxProblem& p, const Matrix& eta, double zero_tol) {
  const Matrix x = p.y + eta;
  const Matrix r0 = p.g + p.coeff * eta;
  double sq = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      double r;
      if (std::abs(x(i, j)) > zero_tol) {
        r = r0(i, j) + (x(i, j) > 0.0 ? p.lambda : -p.lambda);
      } else {
        r = std::max(std::abs(r0(i, j)) - p.lambda, 0.0);
      }
      sq += r * r;
    }
  }
  return std::sqrt(sq);
}

ProxSolution subgradient_solve(const ProxProblem& p, double tol, const ProxOptions& opt) {
  const Manifold& M = p.manifold;
  Matrix eta = Matrix::Zero(p.y.rows(), p.y.cols());
  Matrix avg = eta;
  Matrix best = eta;
  double best_ell = ell_value(p, eta);
  ProxSolution sol;
  sol.status = ProxStatus::kMaxIters;
  int j = 0;
  for (; j < opt.max_iters; ++j) {
    const Matrix z = M.exp(p.y, eta);
    const Matrix G = p.g + p.coeff * eta + M.d_exp_adjoint(p.y, eta, l1_subgradient(p.lambda, z));
    eta = eta - G / (p.coeff * (j + 1));
    const double nrm = M.norm(eta);
    if (nrm > opt.ball_radius) eta *= opt.ball_radius / nrm;
    avg += (eta - avg) / (j + 1.0);
    for (const Matrix* cand : {&eta, &avg}) {
      const double e = ell_value(p, *cand);
      if (e < best_ell) {
        best_ell = e;
        best = *cand;
      }
    }
    if (j % 10 == 9 && stationarity_residual(p, best, opt.zero_tol) <= tol) {
      sol.status = ProxStatus::kConverged;
      ++j;
      break;
    }
  }
  sol.eta = best;
  sol.inner_iters = j;
  return sol;
}

}  // namespace

const char* to_string(ProxStatus status) {
  switch (status) {
    case ProxStatus::kConverged: return "converged";
    case ProxStatus::kMaxIters: return "max_iters";
    case ProxStatus::kStagnated: return "stagnated";
  }
  return "unknown";
}

double ell_value(const ProxProblem& p, const Matrix& eta) {
  const Manifold& M = p.manifold;
  return M.inner(p.g, eta) + 0.5 * p.coeff * eta.squaredNorm() +
         h_l1_value(p.lambda, M.exp(p.y, eta));
}

double stationarity_residual(const ProxProblem& p, const Matrix& eta, double zero_tol) {
  const Manifold& M = p.manifold;
  M.check_shape(eta);
  if (!M.curved()) return euclidean_residual(p, eta, zero_tol);
  double sq = 0.0;
  for (Index j = 0; j < p.y.cols(); ++j) {
    const Vector y = p.y.col(j);
    const Linearization lin = linearize(y, p.g.col(j), p.coeff, eta.col(j));
    const double K = p.coeff / (lin.s * lin.s);
    const SubSolution sub = solve_tangent_plane_l1(lin.bp / K, lin.z, p.lambda, K);
    const double r = column_residual(lin, p.lambda, sub.sigma, zero_tol, 200);
    sq += r * r;
  }
  return std::sqrt(sq);
}

ProxSolution solve(const ProxProblem& p, const ProxOptions& options) {
  const Manifold& M = p.manifold;
  M.check_shape(p.y);
  M.check_shape(p.g);
  if (!(p.coeff > p.rho) || !(p.coeff > 0.0)) {
    std::ostringstream msg;
    msg << "coeff " << p.coeff << " must exceed rho " << p.rho << " and 0";
    throw InvalidParams(msg.str());
  }
  if (p.lambda < 0.0) throw InvalidParams("lambda must be nonnegative");
  const double tol = options.tol > 0.0 ? options.tol
                                       : 1e-10 * std::sqrt(static_cast<double>(M.ambient_dim()));

  ProxSolution sol;
  sol.ell_at_zero = h_l1_value(p.lambda, p.y);

  std::optional<Matrix> fast;
  if (options.fast_path) fast = options.fast_path(p);
  if (fast) {
    sol.eta = *fast;
    sol.inner_iters = 0;
    sol.residual = stationarity_residual(p, sol.eta, options.zero_tol);
    sol.status = sol.residual <= tol ? ProxStatus::kConverged : ProxStatus::kMaxIters;
  } else if (!M.curved()) {
    sol.eta = euclidean_prox(p);
    sol.inner_iters = 1;
    sol.residual = euclidean_residual(p, sol.eta, options.zero_tol);
  } else if (options.method == ProxMethod::kSubgradient) {
    sol = subgradient_solve(p, tol, options);
    sol.ell_at_zero = h_l1_value(p.lambda, p.y);
    sol.residual = stationarity_residual(p, sol.eta, options.zero_tol);
  } else {
    sol.eta.resize(p.y.rows(), p.y.cols());
    const double col_tol = tol / std::sqrt(static_cast<double>(p.y.cols()));
    double sq = 0.0;
    sol.status = ProxStatus::kConverged;
    for (Index j = 0; j < p.y.cols(); ++j) {
      const ColumnResult cr =
          solve_sphere_column(p.y.col(j), p.g.col(j), p.coeff, p.lambda, col_tol, options);
      sol.eta.col(j) = cr.eta;
      sq += cr.residual * cr.residual;
      sol.inner_iters = std::max(sol.inner_iters, cr.iters);
      if (cr.status != ProxStatus::kConverged && sol.status == ProxStatus::kConverged) {
        sol.status = cr.status;
      }
    }
    sol.residual = std::sqrt(sq);
  }

  sol.ell_at_eta = ell_value(p, sol.eta);
  double gain = 0.0, noise = 0.0;
  if (M.curved()) {
    for (Index j = 0; j < p.y.cols(); ++j) {
      double nj = 0.0;
      const Vector y = p.y.col(j);
      const Vector e = sol.eta.col(j);
      gain += column_ell_change(y, p.g.col(j), p.coeff, p.lambda, Vector::Zero(y.size()), y, e, &nj);
      noise += nj;
    }
  } else {
    gain = sol.ell_at_eta - sol.ell_at_zero;
    noise = 4.0 * kEps * std::abs(sol.ell_at_zero);
  }
  if (gain > 0.0) {
    // Within rounding the step is indistinguishable from eta = 0.
    if (fast || gain <= noise) {
      sol.eta.setZero();
      sol.ell_at_eta = sol.ell_at_zero;
      sol.residual = stationarity_residual(p, sol.eta, options.zero_tol);
    } else {
      std::ostringstream msg;
      msg << "l(eta) = " << sol.ell_at_eta << " exceeds l(0) = " << sol.ell_at_zero;
      throw NonConvexBall(msg.str());
    }
  }
  return sol;
}

ProxSolution solve_grid_oracle(const ProxProblem& p, double radius, double resolution,
                               int refine_levels) {
  const Manifold& M = p.manifold;
  const Index dim = M.tangent_dim();
  if (dim > 3) throw DimensionTooLarge("grid oracle supports tangent dimension <= 3");
  if (!(radius > 0.0) || radius >= std::numbers::pi) throw DomainError("radius must lie in (0, pi)");
  if (!(resolution > 0.0)) throw DomainError("resolution must be positive");

  // Orthonormal basis of T_y, stored as flattened ambient vectors.
  const Index amb = M.ambient_dim();
  Matrix basis(amb, dim);
  {
    Matrix proj(amb, amb);
    for (Index k = 0; k < amb; ++k) {
      Matrix e = Matrix::Zero(M.rows(), M.cols());
      e(k % M.rows(), k / M.rows()) = 1.0;
      const Matrix t = M.project_tangent(p.y, e);
      proj.col(k) = Eigen::Map<const Vector>(t.data(), amb);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(proj);
    basis = es.eigenvectors().rightCols(dim);
  }
  auto to_tangent = [&](const Vector& coords) {
    Vector flat = basis * coords;
    return Matrix(Eigen::Map<Matrix>(flat.data(), M.rows(), M.cols()));
  };

  Vector best = Vector::Zero(dim);
  double best_val = ell_value(p, to_tangent(best));
  auto consider = [&](const Vector& coords, double v, Vector& local_best, double& local_val) {
    if (v < local_val) {
      local_val = v;
      local_best = coords;
    }
  };
  auto try_point = [&](const Matrix& x, Vector& local_best, double& local_val) {
    if (M.curved() && (x.colwise().norm().array() == 0.0).any()) return;
    const Matrix eta = M.log(p.y, M.normalize(x));
    const Vector coords = basis.transpose() * Eigen::Map<const Vector>(eta.data(), amb);
    if (coords.norm() <= radius) consider(coords, ell_value(p, to_tangent(coords)), local_best, local_val);
  };
  auto scan = [&](const Vector& center, double half_width, int per_axis) {
    const double h = per_axis > 1 ? 2.0 * half_width / (per_axis - 1) : 0.0;
    Vector coords(dim);
    std::vector<int> idx(dim, 0);
    Vector local_best = best;
    double local_val = best_val;
    while (true) {
      for (Index d = 0; d < dim; ++d) coords(d) = center(d) - half_width + h * idx[d];
      if (coords.norm() <= radius) {
        const Matrix eta = to_tangent(coords);
        consider(coords, ell_value(p, eta), local_best, local_val);
        // Minimizers often sit where an entry of Exp_y(eta) vanishes, a set no
        // grid hits exactly; add the grid point pushed onto that set.
        const Matrix x = M.exp(p.y, eta);
        Matrix snapped = x;
        for (Index k = 0; k < x.size(); ++k) {
          if (std::abs(x(k)) > 2.0 * h || x(k) == 0.0) continue;
          snapped(k) = 0.0;
          Matrix single = x;
          single(k) = 0.0;
          try_point(single, local_best, local_val);
        }
        try_point(snapped, local_best, local_val);
      }
      Index d = 0;
      while (d < dim && ++idx[d] == per_axis) idx[d++] = 0;
      if (d == dim) break;
    }
    best = local_best;
    best_val = local_val;
  };

  const int coarse = 2 * static_cast<int>(std::ceil(radius / resolution)) + 1;
  scan(Vector::Zero(dim), resolution * (coarse - 1) / 2, coarse);
  double half = resolution;
  for (int level = 0; level < refine_levels && half > 1e-13; ++level) {
    scan(best, half, 21);
    half *= 0.5;
  }

  ProxSolution sol;
  sol.eta = to_tangent(best);
  sol.ell_at_eta = best_val;
  sol.ell_at_zero = h_l1_value(p.lambda, p.y);
  sol.residual = stationarity_residual(p, sol.eta);
  sol.inner_iters = refine_levels;
  return sol;
}

}  // namespace rapg
