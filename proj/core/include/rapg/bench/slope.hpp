#pragma once

#include <vector>

#include "rapg/solvers.hpp"

namespace rapg::bench {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y ~ slope * x + intercept.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y);

struct SlopeFit {
  double s = 0.0;
  double kappa = 0.0;
  /// 1 / (1 - e^s)
  double transformed = 0.0;
  int points = 0;
};

/// (theta L - rho) xi / (mu - rho).
double condition_number(const RapgParams& p);

/// Fits log(F_k - F_star) against k on the last `tail_fraction` of the
/// sequence. Throws InsufficientTail (fewer than 50 values or 10 tail points)
/// and NonPositiveGap.
SlopeFit fit_slope(const std::vector<double>& F, double F_star, double kappa,
                   double tail_fraction = 0.2);

/// Same on a run trace; a final row that stopped below the reference is dropped.
SlopeFit fit_slope(const RunRecord& rec, double F_star, const RapgParams& p,
                   double tail_fraction = 0.2);

}  // namespace rapg::bench
