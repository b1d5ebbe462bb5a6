#pragma once

#include <string>
#include <vector>

namespace rapg {

/// Constants of the accelerated method. zeta, delta come from curvature_constants.
struct RapgParams {
  double L = 1.0;
  double mu = 0.0;
  double rho = 0.0;
  double zeta = 1.0;
  double delta = 1.0;
  double xi = 1.0;
  double theta = 1.0;
  double A0 = 1e-3;

  /// (theta L - rho) and (mu - rho), the two quantities every formula uses.
  double c() const { return theta * L - rho; }
  double m() const { return mu - rho; }
};

/// One application of the A_k recursion together with the derived scalars.
struct ScheduleStep {
  double A_k = 0.0;
  double A_next = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double G_next = 0.0;
  double E_next = 0.0;
  double P_k = 0.0;
  double P_next = 0.0;
};

ScheduleStep next_schedule(const RapgParams& p, double A_k);

/// Relative residual of A_next in the quadratic whose larger root it is.
double schedule_root_residual(const RapgParams& p, double A_k, double A_next);

double schedule_G(const RapgParams& p, double A);
double schedule_E(const RapgParams& p, double A);
double schedule_P(const RapgParams& p, double A);

enum class Condition { kI, kII, kIII, kNone };
const char* to_string(Condition c);

struct ConditionReport {
  Condition applicable = Condition::kNone;
  double theta_lower = 0.0;  // theta_1 or theta_2; the Require bound for case (i)
  double A1_lower = 0.0;
  double lambda_used = 2.0;
  bool satisfied = false;
  bool theta_at_bound = false;  // theta equals (rho + (mu - rho) xi) / L
};

/// Checks the admissibility inequalities, throwing InvalidParams on the first
/// violation, and classifies the sufficient conditions for potential decrease.
ConditionReport validate_params(const RapgParams& p, double lambda = 2.0);

/// Copy of p with mu raised to rho when mu < rho; notes the clamp in `warnings`.
RapgParams clamp_params(const RapgParams& p, std::vector<std::string>* warnings);

/// theta = max((rho + (mu - rho) xi) / L, 1).
double default_theta(double L, double mu, double rho, double xi);

/// 4 (xi - zeta) E_{k+1} - (xi - delta)(sqrt(A_{k+1}) - sqrt(G_{k+1})).
double d11_margin(const ScheduleStep& step, const RapgParams& p);
bool check_D11(const ScheduleStep& step, const RapgParams& p);

struct GrowthReport {
  double min_linear_margin = 0.0;     // min_k (A_k - (sqrt(A_0) + k/2)^2) / max(1, A_k)
  double min_geometric_margin = 0.0;  // min_k log A_k - log(A_0 / (1 - q)^k)
  bool ok = true;
};

/// Checks both lower bounds on the growth of A_k along `A` = (A_0, A_1, ...).
GrowthReport growth_check(const std::vector<double>& A, const RapgParams& p);

}  // namespace rapg
