#include "rapg/restart.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg {

void SafeguardConfig::validate() const {
  if (!(N_min >= 1 && N_min <= N0 && N0 <= N_max)) throw InvalidParams("need 1 <= N_min <= N0 <= N_max");
  if (!(tau_L > 1.0)) throw InvalidParams("tau_L must exceed 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidParams("sigma must lie in (0, 1)");
  if (!(iota > 0.0 && iota < 1.0)) throw InvalidParams("iota must lie in (0, 1)");
  if (N_ls < 1) throw InvalidParams("N_ls must be positive");
  if (!(L_cap_factor > 1.0)) throw InvalidParams("L_cap_factor must exceed 1");
}

LineSearchResult line_search(const Matrix& x_tilde, const Matrix& eta, double F_xtilde,
                             const SafeguardConfig& cfg, const CompositeObjective& obj) {
  const Manifold& M = obj.manifold();
  const double eta_sq = eta.squaredNorm();
  LineSearchResult res;
  res.alpha = 1.0;
  auto eval = [&] {
    res.x = M.exp(x_tilde, res.alpha * eta);
    res.F = obj.value(res.x);
    ++res.F_evals;
    // Slack at the rounding level of F; without it a converged iterate fails
    // the test forever and L escalates to the cap.
    const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(F_xtilde);
    return res.F <= F_xtilde - cfg.sigma * res.alpha * eta_sq + noise;
  };
  bool ok = eval();
  while (!ok && res.iters < cfg.N_ls) {
    res.alpha *= cfg.iota;
    ++res.iters;
    ok = eval();
  }
  res.accepted = ok;
  return res;
}

SafeguardOutcome safeguard(const SafeguardState& in, const Matrix& x_k, const Matrix& z_k,
                           double A_k, const RapgParams& p, const SafeguardConfig& cfg,
                           const CompositeObjective& obj, const ProxOptions& prox) {
  const Manifold& M = obj.manifold();
  const double L_init = cfg.L_init > 0.0 ? cfg.L_init : p.L;
  const double cap = cfg.L_cap_factor * L_init;
  auto check_cap = [&](double L) {
    if (L > cap) {
      std::ostringstream msg;
      msg << "L = " << L << " exceeds " << cfg.L_cap_factor << " * L_init";
      throw LEscalationDiverged(msg.str());
    }
  };

  SafeguardOutcome out;
  out.F_xtilde = obj.value(in.x_tilde);
  out.F_evals = 1;
  double L = in.L;
  const Matrix g = obj.f->riem_grad(in.x_tilde);
  LineSearchResult ls;
  Matrix eta;
  while (true) {
    ProxProblem pp{M, in.x_tilde, g, p.theta * L, obj.lambda, p.rho};
    eta = solve(pp, prox).eta;
    ls = line_search(in.x_tilde, eta, out.F_xtilde, cfg, obj);
    out.F_evals += ls.F_evals;
    if (ls.accepted) break;
    L *= cfg.tau_L;
    ++out.L_escalations;
    check_cap(L);
  }
  out.alpha = ls.alpha;
  out.ls_iters = ls.iters;
  out.eta_norm = eta.norm();
  out.F_candidate = ls.F;
  out.F_xk = obj.value(x_k);
  ++out.F_evals;

  // A win inside rounding noise is not a win: counting it would escalate L
  // on every check once the iterates reach machine precision.
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.F_xk);
  if (ls.F < out.F_xk - noise) {
    out.triggered = true;
    if (in.N != cfg.N_max) {
      L *= cfg.tau_L;
      check_cap(L);
    }
    out.x_k = ls.x;
    out.z_k = ls.x;
    out.A_k = p.A0;
    out.N_next = std::max(in.N - 1, cfg.N_min);
  } else {
    out.x_k = x_k;
    out.z_k = z_k;
    out.A_k = A_k;
    out.N_next = std::min(in.N + 1, cfg.N_max);
  }
  out.L_next = L;
  out.x_tilde_next = out.x_k;
  return out;
}

ArRapgRecord ar_rapg_run(const Matrix& x0, const RapgParams& params, const SafeguardConfig& cfg_in,
                         const CompositeObjective& obj, const ProxOptions& prox,
                         const Termination& term) {
  cfg_in.validate();
  const Manifold& M = obj.manifold();
  M.check_shape(x0);
  ArRapgRecord rec;
  rec.method = Method::kArRapg;
  RapgParams p = clamp_params(params, &rec.warnings);
  SafeguardConfig cfg = cfg_in;
  if (cfg.L_init <= 0.0) cfg.L_init = p.L;
  p.L = cfg.L_init;
  if (validate_params(p).theta_at_bound) {
    rec.warnings.push_back("theta equals its Require-line lower bound");
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double threshold = term.tol * static_cast<double>(M.ambient_dim());

  SolverState s = initial_state(x0, p);
  SafeguardState sg;
  sg.x_tilde = x0;
  sg.N = cfg.N0;
  sg.L = p.L;
  sg.next_check = cfg.N0;
  double F = obj.value(s.x);
  double F_tilde = F;
  TraceRow row0;
  row0.F = F;
  row0.A = s.A;
  row0.L = p.L;
  rec.rows.push_back(row0);

  rec.reason = StopReason::kMaxIters;
  bool pending_flag = false;
  while (s.k < term.max_iters) {
    if (s.k == sg.next_check) {
      const SafeguardOutcome o = safeguard(sg, s.x, s.z, s.A, p, cfg, obj, prox);
      rec.safeguard_F_evals += o.F_evals;
      rec.prox_calls += 1 + o.L_escalations;
      rec.L_escalations += o.L_escalations;
      SafeguardEvent ev;
      ev.k = s.k;
      ev.triggered = o.triggered;
      ev.alpha = o.alpha;
      ev.ls_iters = o.ls_iters;
      ev.L_escalations = o.L_escalations;
      ev.L_before = sg.L;
      ev.L_after = o.L_next;
      ev.F_xtilde = o.F_xtilde;
      ev.F_candidate = o.F_candidate;
      ev.F_xk = o.F_xk;
      ev.eta_norm = o.eta_norm;
      ev.N_next = o.N_next;
      rec.safeguards.push_back(ev);

      const double F_next_tilde = o.triggered ? o.F_candidate : o.F_xk;
      if (!(F_next_tilde <= o.F_candidate && o.F_candidate <= F_tilde)) {
        rec.warnings.push_back("reference sequence failed to decrease at k = " + std::to_string(s.k));
      }
      F_tilde = F_next_tilde;
      if (o.triggered) {
        s.x = o.x_k;
        s.z = o.z_k;
        s.A = o.A_k;
        F = o.F_candidate;
        ++rec.restarts;
      }
      sg.x_tilde = o.x_tilde_next;
      sg.N = o.N_next;
      sg.L = o.L_next;
      sg.next_check += o.N_next;
      ++sg.i;
      p.L = sg.L;
      pending_flag = true;
    }

    SolverState next = rapg_step(s, p, obj, prox);
    ++rec.prox_calls;
    const double eta_norm = next.last_eta.norm();
    if (std::pow(p.L * eta_norm, 2) < threshold) {
      rec.reason = StopReason::kEtaTolerance;
      break;
    }
    const double F_next = obj.value(next.x);
    if (!std::isfinite(F_next)) throw NonFiniteValue("objective became non-finite");
    s = std::move(next);
    F = F_next;
    TraceRow row;
    row.k = s.k;
    row.F = F;
    row.eta_norm = eta_norm;
    row.A = s.A;
    row.beta = s.last_step.beta;
    row.gamma = s.last_step.gamma;
    row.tau = s.last_step.tau;
    row.L = p.L;
    row.restarts = rec.restarts;
    row.safeguard = pending_flag;
    row.prox_residual = s.last_prox.residual;
    row.prox_iters = s.last_prox.inner_iters;
    row.prox_solves = rec.prox_calls;
    row.elapsed_s = elapsed();
    rec.rows.push_back(row);
    pending_flag = false;
    if (term.observer) term.observer(s);
    if (term.F_ref && F < *term.F_ref) {
      rec.reason = StopReason::kReferenceMinimum;
      break;
    }
  }

  ProxProblem last{M, s.x, obj.f->riem_grad(s.x), p.theta * p.L, obj.lambda, p.rho};
  rec.final_safeguard_eta = solve(last, prox).eta.norm();
  rec.final_L = p.L;
  rec.x_final = s.x;
  rec.iterations = s.k;
  rec.final_F = F;
  rec.elapsed_s = elapsed();
  return rec;
}

}  // namespace rapg
