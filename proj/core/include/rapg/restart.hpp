#pragma once

#include "rapg/solvers.hpp"

namespace rapg {

struct SafeguardConfig {
  int N0 = 5;
  int N_min = 2;
  int N_max = 10;
  /// Initial Lipschitz estimate; non-positive means "use RapgParams::L".
  double L_init = -1.0;
  double tau_L = 1.1;
  double sigma = 1e-4;
  double iota = 0.5;
  int N_ls = 3;
  /// LEscalationDiverged is thrown once L exceeds L_cap_factor * L_init.
  double L_cap_factor = 1e12;

  void validate() const;
};

struct SafeguardState {
  Matrix x_tilde;
  int N = 5;
  double L = 1.0;
  int next_check = 5;
  int i = 0;
};

struct LineSearchResult {
  double alpha = 1.0;
  int iters = 0;
  double F = 0.0;
  bool accepted = false;
  Matrix x;
  long F_evals = 0;
};

/// Backtracks alpha in {1, iota, ..., iota^N_ls} until
/// F(Exp(alpha eta)) <= F(x_tilde) - sigma alpha ||eta||^2.
LineSearchResult line_search(const Matrix& x_tilde, const Matrix& eta, double F_xtilde,
                             const SafeguardConfig& cfg, const CompositeObjective& obj);

struct SafeguardOutcome {
  bool triggered = false;
  Matrix x_k;
  Matrix z_k;
  double A_k = 0.0;
  int N_next = 0;
  double L_next = 0.0;
  int ls_iters = 0;
  int L_escalations = 0;
  double alpha = 1.0;
  double F_xtilde = 0.0;
  double F_candidate = 0.0;
  double F_xk = 0.0;
  double eta_norm = 0.0;
  long F_evals = 0;
  Matrix x_tilde_next;
};

/// Descent check of the current iterate against a line-searched proximal
/// step from the reference point, with restart and L escalation.
SafeguardOutcome safeguard(const SafeguardState& in, const Matrix& x_k, const Matrix& z_k,
                           double A_k, const RapgParams& p, const SafeguardConfig& cfg,
                           const CompositeObjective& obj, const ProxOptions& prox);

struct ArRapgRecord : RunRecord {
  /// ||eta|| of a proximal step from the final iterate with the final L.
  double final_safeguard_eta = 0.0;
  double final_L = 0.0;
  int L_escalations = 0;
};

ArRapgRecord ar_rapg_run(const Matrix& x0, const RapgParams& p, const SafeguardConfig& cfg,
                         const CompositeObjective& obj, const ProxOptions& prox,
                         const Termination& term);

}  // namespace rapg
