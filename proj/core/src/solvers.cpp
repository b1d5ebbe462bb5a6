#include "rapg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg {

const char* to_string(Method m) {
  switch (m) {
    case Method::kRpg: return "rpg";
    case Method::kRapg: return "rapg";
    case Method::kArRapg: return "ar-rapg";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "rpg") return Method::kRpg;
  if (name == "rapg") return Method::kRapg;
  if (name == "ar-rapg" || name == "arrapg") return Method::kArRapg;
  throw ConfigError("unknown method '" + name + "'");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kEtaTolerance: return "eta_tolerance";
    case StopReason::kMaxIters: return "max_iters";
    case StopReason::kReferenceMinimum: return "reference_minimum";
  }
  return "unknown";
}

double RunRecord::sparsity(double tol) const {
  if (x_final.size() == 0) return 0.0;
  return static_cast<double>((x_final.array().abs() < tol).count()) /
         static_cast<double>(x_final.size());
}

std::vector<double> RunRecord::A_trace() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.A);
  return out;
}

SolverState initial_state(const Matrix& x0, const RapgParams& p) {
  SolverState s;
  s.x = x0;
  s.y = x0;
  s.z = x0;
  s.k = 0;
  s.A = p.A0;
  s.last_eta = Matrix::Zero(x0.rows(), x0.cols());
  return s;
}

SolverState rapg_step(const SolverState& s, const RapgParams& p, const CompositeObjective& obj,
                      const ProxOptions& prox) {
  const Manifold& M = obj.manifold();
  SolverState out;
  out.last_step = next_schedule(p, s.A);
  const ScheduleStep& st = out.last_step;
  out.y = M.exp(s.x, st.tau * M.log(s.x, s.z));
  ProxProblem pp{M, out.y, obj.f->riem_grad(out.y), p.theta * p.L, obj.lambda, p.rho};
  out.last_prox = solve(pp, prox);
  const Matrix& eta = out.last_prox.eta;
  out.x = M.exp(out.y, eta);
  const Matrix v = st.beta * M.log(out.y, s.z) + st.gamma * eta;
  out.z = M.exp(out.x, M.transport(out.y, out.x, v - eta));
  out.last_eta = eta;
  out.A = st.A_next;
  out.k = s.k + 1;
  if (!std::isfinite(out.A)) throw NonFiniteValue("A_k overflowed");
  return out;
}

SolverState rpg_step(const SolverState& s, const RapgParams& p, const CompositeObjective& obj,
                     const ProxOptions& prox) {
  const Manifold& M = obj.manifold();
  SolverState out;
  ProxProblem pp{M, s.x, obj.f->riem_grad(s.x), p.theta * p.L, obj.lambda, p.rho};
  out.last_prox = solve(pp, prox);
  out.last_eta = out.last_prox.eta;
  out.y = s.x;
  out.x = M.exp(s.x, out.last_eta);
  out.z = out.x;
  out.A = s.A;
  out.k = s.k + 1;
  return out;
}

double potential(const SolverState& s, const Matrix& x_star, double F_star, const RapgParams& p,
                 const CompositeObjective& obj) {
  const Manifold& M = obj.manifold();
  const Matrix lz = M.log(s.x, s.z);
  const Matrix ls = M.log(s.x, x_star);
  const double P = schedule_P(p, s.A);
  return s.A * (obj.value(s.x) - F_star) +
         0.5 * P * ((lz - ls).squaredNorm() + (p.xi - 1.0) * lz.squaredNorm());
}

RunRecord run(Method method, const Matrix& x0, const RapgParams& params,
              const CompositeObjective& obj, const ProxOptions& prox, const Termination& term) {
  if (method == Method::kArRapg) {
    throw InvalidParams("use ar_rapg_run for the restarted method");
  }
  const Manifold& M = obj.manifold();
  M.check_shape(x0);
  RunRecord rec;
  rec.method = method;
  RapgParams p = clamp_params(params, &rec.warnings);
  if (method == Method::kRapg) {
    const ConditionReport rep = validate_params(p);
    if (rep.theta_at_bound) rec.warnings.push_back("theta equals its Require-line lower bound");
  } else if (!(p.theta * p.L > p.rho)) {
    throw InvalidParams("theta L must exceed rho");
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double threshold = term.tol * static_cast<double>(M.ambient_dim());

  SolverState s = initial_state(x0, p);
  double F = obj.value(s.x);
  TraceRow row0;
  row0.F = F;
  row0.A = s.A;
  row0.L = p.L;
  rec.rows.push_back(row0);

  rec.reason = StopReason::kMaxIters;
  while (s.k < term.max_iters) {
    SolverState next = method == Method::kRapg ? rapg_step(s, p, obj, prox) : rpg_step(s, p, obj, prox);
    ++rec.prox_calls;
    const double eta_norm = next.last_eta.norm();
    if (std::pow(p.L * eta_norm, 2) < threshold) {
      rec.reason = StopReason::kEtaTolerance;
      break;
    }
    const double F_next = obj.value(next.x);
    if (!std::isfinite(F_next)) throw NonFiniteValue("objective became non-finite");
    if (method == Method::kRpg && F_next > F + 1e-12 * (1.0 + std::abs(F))) {
      ++rec.monotonicity_violations;
    }
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
    row.prox_residual = s.last_prox.residual;
    row.prox_iters = s.last_prox.inner_iters;
    row.prox_solves = rec.prox_calls;
    row.elapsed_s = elapsed();
    rec.rows.push_back(row);
    if (term.observer) term.observer(s);
    if (method != Method::kRpg && term.F_ref && F < *term.F_ref) {
      rec.reason = StopReason::kReferenceMinimum;
      break;
    }
  }
  if (rec.monotonicity_violations > 0) {
    std::ostringstream msg;
    msg << rec.monotonicity_violations << " objective increases: L may be underestimated";
    rec.warnings.push_back(msg.str());
  }
  rec.x_final = s.x;
  rec.iterations = s.k;
  rec.final_F = F;
  rec.elapsed_s = elapsed();
  return rec;
}

}  // namespace rapg
