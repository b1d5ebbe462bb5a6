#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rapg/objective.hpp"
#include "rapg/prox.hpp"
#include "rapg/schedule.hpp"

namespace rapg {

enum class Method { kRpg, kRapg, kArRapg };
const char* to_string(Method m);
/// Parses "rpg", "rapg" or "ar-rapg"; throws ConfigError otherwise.
Method parse_method(const std::string& name);

struct SolverState {
  Matrix x, y, z;
  int k = 0;
  double A = 0.0;
  Matrix last_eta;
  ScheduleStep last_step;
  ProxSolution last_prox;
};

SolverState initial_state(const Matrix& x0, const RapgParams& p);

/// One accelerated step from `s` using schedule constants of `p`.
SolverState rapg_step(const SolverState& s, const RapgParams& p, const CompositeObjective& obj,
                      const ProxOptions& prox);

/// One proximal gradient step x+ = Exp_x(eta) with coefficient theta L.
SolverState rpg_step(const SolverState& s, const RapgParams& p, const CompositeObjective& obj,
                     const ProxOptions& prox);

/// A_k (F(x_k) - F*) + P_k/2 (||log z - log x*||^2 + (xi - 1) ||log z||^2), logs at x_k.
double potential(const SolverState& s, const Matrix& x_star, double F_star, const RapgParams& p,
                 const CompositeObjective& obj);

struct TraceRow {
  int k = 0;
  double F = 0.0;
  double eta_norm = 0.0;
  double A = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double L = 0.0;
  int restarts = 0;
  bool safeguard = false;
  double prox_residual = 0.0;
  int prox_iters = 0;
  long prox_solves = 0;  // cumulative, safeguard solves included
  double elapsed_s = 0.0;
};

struct SafeguardEvent {
  int k = 0;
  bool triggered = false;
  double alpha = 1.0;
  int ls_iters = 0;
  int L_escalations = 0;
  double L_before = 0.0;
  double L_after = 0.0;
  double F_xtilde = 0.0;
  double F_candidate = 0.0;
  double F_xk = 0.0;
  double eta_norm = 0.0;
  int N_next = 0;
};

enum class StopReason { kEtaTolerance, kMaxIters, kReferenceMinimum };
const char* to_string(StopReason r);

struct RunRecord {
  Method method = Method::kRapg;
  std::vector<TraceRow> rows;
  std::vector<SafeguardEvent> safeguards;
  std::vector<std::string> warnings;
  Matrix x_final;
  int iterations = 0;
  StopReason reason = StopReason::kMaxIters;
  double final_F = 0.0;
  double elapsed_s = 0.0;
  long prox_calls = 0;
  long safeguard_F_evals = 0;
  int monotonicity_violations = 0;
  int restarts = 0;

  /// Fraction of entries of x_final with magnitude below `tol`.
  double sparsity(double tol = 1e-6) const;
  std::vector<double> A_trace() const;
};

struct Termination {
  int max_iters = 10000;
  /// Stop once (L ||eta||)^2 < tol * n * p.
  double tol = 1e-10;
  /// Accelerated methods stop once F drops below this value.
  std::optional<double> F_ref;
  /// Called after every committed step.
  std::function<void(const SolverState&)> observer;
};

/// Runs RPG or RAPG (not AR-RAPG, see restart.hpp) from x0.
RunRecord run(Method method, const Matrix& x0, const RapgParams& p, const CompositeObjective& obj,
              const ProxOptions& prox, const Termination& term);

}  // namespace rapg
