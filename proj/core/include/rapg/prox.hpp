#pragma once

#include <functional>
#include <numbers>
#include <optional>

#include "rapg/geometry.hpp"

namespace rapg {

/// Subproblem l_y(eta) = <g, eta> + coeff/2 ||eta||^2 + lambda ||Exp_y(eta)||_1.
struct ProxProblem {
  Manifold manifold;
  Matrix y;
  Matrix g;
  double coeff = 1.0;
  double lambda = 0.0;
  double rho = 0.0;
};

enum class ProxMethod { kProxLinear, kSubgradient };
enum class ProxStatus { kConverged, kMaxIters, kStagnated };

const char* to_string(ProxStatus status);

struct ProxOptions {
  /// Non-positive means 1e-10 * sqrt(ambient dimension).
  double tol = -1.0;
  int max_iters = 500;
  double ball_radius = std::numbers::pi / 2;
  /// Coordinates of Exp_y(eta) below this magnitude count as zero when the
  /// l1 subdifferential is formed.
  double zero_tol = 1e-10;
  ProxMethod method = ProxMethod::kProxLinear;
  /// Optional closed-form solver; returning nullopt falls back to `method`.
  std::function<std::optional<Matrix>(const ProxProblem&)> fast_path;
};

struct ProxSolution {
  Matrix eta;
  double ell_at_eta = 0.0;
  double ell_at_zero = 0.0;
  double residual = 0.0;
  int inner_iters = 0;
  ProxStatus status = ProxStatus::kConverged;
};

double ell_value(const ProxProblem& p, const Matrix& eta);

/// Stationary point of l_y with l_y(eta) <= l_y(0). Throws InvalidParams if
/// coeff <= rho and NonConvexBall if the descent contract cannot be met.
ProxSolution solve(const ProxProblem& p, const ProxOptions& options = {});

/// Estimate of dist(0, d l_y(eta)) for the l1 penalty.
double stationarity_residual(const ProxProblem& p, const Matrix& eta, double zero_tol = 1e-10);

/// Exhaustive grid search over the tangent ball with zooming refinement.
/// Only for tangent dimension <= 3 (throws DimensionTooLarge otherwise).
ProxSolution solve_grid_oracle(const ProxProblem& p, double radius, double resolution,
                               int refine_levels = 40);

}  // namespace rapg
