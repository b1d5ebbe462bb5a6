#include "rapg/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg {
namespace {

[[noreturn]] void fail(const std::string& what, double lhs, double rhs) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " (" << lhs << " vs " << rhs << ")";
  throw InvalidParams(msg.str());
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }

}  // namespace

double schedule_G(const RapgParams& p, double A) { return 1.0 + p.m() * A / (p.c() * p.xi); }

double schedule_E(const RapgParams& p, double A) {
  return std::sqrt(A) - p.xi * std::sqrt(schedule_G(p, A));
}

double schedule_P(const RapgParams& p, double A) { return p.xi * p.c() + p.m() * A; }

ScheduleStep next_schedule(const RapgParams& p, double A) {
  const double xi = p.xi;
  const double c = p.c();
  const double m = p.m();
  const double q = m / c;
  ScheduleStep s;
  s.A_k = A;
  // Larger root, written as A * (...) so that A ~ 1e300 does not overflow.
  const double inv = 1.0 / A;
  const double disc = xi * xi * inv * inv + 4.0 * xi * xi * inv + 4.0 * q * xi;
  s.A_next = A * (xi * inv + 2.0 * xi + std::sqrt(disc)) / (2.0 * (xi - q));
  const double den = xi * c + m * s.A_next;
  s.beta = (xi * c + m * A) / den;
  s.gamma = c * (s.A_next - A) / den;
  s.tau = s.beta / (s.gamma * (A / s.A_next) + s.beta);
  s.G_next = schedule_G(p, s.A_next);
  s.E_next = schedule_E(p, s.A_next);
  s.P_k = schedule_P(p, A);
  s.P_next = schedule_P(p, s.A_next);
  return s;
}

double schedule_root_residual(const RapgParams& p, double A_k, double A_next) {
  // A'/xi (xi c + m A') = c (A' - A)^2, divided through by A'^2.
  const double lhs = p.c() * std::pow(1.0 - A_k / A_next, 2);
  const double rhs = (p.xi * p.c() / A_next + p.m()) / p.xi;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::kI: return "i";
    case Condition::kII: return "ii";
    case Condition::kIII: return "iii";
    case Condition::kNone: return "none";
  }
  return "none";
}

double default_theta(double L, double mu, double rho, double xi) {
  return std::max((rho + (mu - rho) * xi) / L, 1.0);
}

RapgParams clamp_params(const RapgParams& p, std::vector<std::string>* warnings) {
  RapgParams out = p;
  if (out.mu < out.rho) {
    if (warnings) {
      std::ostringstream msg;
      msg << "mu = " << p.mu << " < rho = " << p.rho << "; clamped mu to rho";
      warnings->push_back(msg.str());
    }
    out.mu = out.rho;
  }
  return out;
}

ConditionReport validate_params(const RapgParams& p, double lambda) {
  for (double v : {p.L, p.mu, p.rho, p.zeta, p.delta, p.xi, p.theta, p.A0}) {
    if (!std::isfinite(v)) throw InvalidParams("all parameters must be finite");
  }
  if (!(p.L > p.mu)) fail("L > mu violated", p.L, p.mu);
  if (!(p.mu >= p.rho)) fail("mu >= rho violated", p.mu, p.rho);
  if (!(p.mu >= 0.0)) fail("mu >= 0 violated", p.mu, 0.0);
  if (!(p.zeta >= 1.0)) fail("zeta >= 1 violated", p.zeta, 1.0);
  if (!(p.delta <= 1.0)) fail("delta <= 1 violated", p.delta, 1.0);
  if (!(p.xi >= p.zeta)) fail("xi >= zeta violated", p.xi, p.zeta);
  if (!(p.theta >= 1.0)) fail("theta >= 1 violated", p.theta, 1.0);
  if (!(p.A0 > 0.0)) fail("A0 > 0 violated", p.A0, 0.0);
  if (!(lambda > 1.0 && lambda < 4.0)) fail("lambda in (1, 4) violated", lambda, 0.0);

  ConditionReport rep;
  rep.lambda_used = lambda;
  const double theta_req = (p.rho + p.m() * p.xi) / p.L;
  if (near(p.theta, theta_req)) {
    rep.theta_at_bound = true;
  } else if (!(p.theta > theta_req)) {
    fail("theta > (rho + (mu - rho) xi) / L violated", p.theta, theta_req);
  }
  if (p.xi > 1.0) {
    const double denom = 1.0 - p.m() * p.xi / p.c();
    const double a0_req = denom > 0.0 ? p.xi * (p.xi - 1.0) / denom
                                      : std::numeric_limits<double>::infinity();
    if (!(p.A0 > a0_req)) fail("A0 > xi (xi - 1) / (1 - (mu - rho) xi / (theta L - rho)) violated", p.A0, a0_req);
  }

  const double A1 = next_schedule(p, p.A0).A_next;
  const bool unit_curv = near(p.zeta, 1.0) && near(p.delta, 1.0);
  if (unit_curv && near(p.xi, 1.0)) {
    rep.applicable = Condition::kI;
    rep.theta_lower = theta_req;
    rep.A1_lower = 0.0;
    rep.satisfied = true;
  } else if (unit_curv) {
    const double a = (4.0 * p.xi - 1.0) * (4.0 * p.xi - 1.0);
    rep.applicable = Condition::kII;
    rep.theta_lower = a * p.m() / (9.0 * p.xi * p.L) + p.rho / p.L;
    const double N1 = 9.0 - a * p.m() / (p.c() * p.xi);
    rep.A1_lower = N1 > 0.0 ? a / N1 : std::numeric_limits<double>::infinity();
    rep.satisfied = p.theta > std::max(rep.theta_lower, 1.0) && A1 >= rep.A1_lower;
  } else if (p.zeta > p.delta && p.xi >= p.zeta + (p.zeta - p.delta) / (lambda - 1.0) - 1e-14) {
    const double a = std::pow(4.0 * p.xi / lambda - 1.0, 2);
    const double b = std::pow(4.0 / lambda - 1.0, 2);
    rep.applicable = Condition::kIII;
    rep.theta_lower = a * p.m() / (b * p.L * p.xi) + p.rho / p.L;
    const double N2 = b - a * p.m() / (p.c() * p.xi);
    rep.A1_lower = N2 > 0.0 ? a / N2 : std::numeric_limits<double>::infinity();
    rep.satisfied = p.theta > std::max(rep.theta_lower, 1.0) && A1 >= rep.A1_lower;
  }
  return rep;
}

double d11_margin(const ScheduleStep& step, const RapgParams& p) {
  return 4.0 * (p.xi - p.zeta) * step.E_next -
         (p.xi - p.delta) * (std::sqrt(step.A_next) - std::sqrt(step.G_next));
}

bool check_D11(const ScheduleStep& step, const RapgParams& p) {
  const double a = 4.0 * (p.xi - p.zeta) * std::abs(step.E_next);
  const double b = (p.xi - p.delta) * (std::sqrt(step.A_next) + std::sqrt(step.G_next));
  return d11_margin(step, p) >= -1e-12 * (1.0 + a + b);
}

GrowthReport growth_check(const std::vector<double>& A, const RapgParams& p) {
  GrowthReport rep;
  if (A.empty()) return rep;
  rep.min_linear_margin = std::numeric_limits<double>::infinity();
  rep.min_geometric_margin = std::numeric_limits<double>::infinity();
  const double a0 = A.front();
  const double q = p.m() > 0.0 ? std::sqrt(p.m() / (p.c() * p.xi)) : 0.0;
  const double log_rate = std::log1p(-q);
  for (std::size_t k = 0; k < A.size(); ++k) {
    const double lin = std::pow(std::sqrt(a0) + 0.5 * static_cast<double>(k), 2);
    rep.min_linear_margin = std::min(rep.min_linear_margin, (A[k] - lin) / std::max(1.0, A[k]));
    const double geo = std::log(A[k]) - std::log(a0) + static_cast<double>(k) * log_rate;
    rep.min_geometric_margin = std::min(rep.min_geometric_margin, geo);
  }
  rep.ok = rep.min_linear_margin >= -1e-12 && rep.min_geometric_margin >= -1e-12;
  return rep;
}

}  // namespace rapg
