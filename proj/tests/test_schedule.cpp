#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rapg/errors.hpp"
#include "rapg/schedule.hpp"

using namespace rapg;

namespace {

RapgParams convex_unit(double L = 1.0) {
  RapgParams p;
  p.L = L;
  p.mu = 0.0;
  p.rho = 0.0;
  return p;
}

}  // namespace

TEST(Schedule, ExactArithmeticSteps) {
  const RapgParams p = convex_unit();
  const ScheduleStep s = next_schedule(p, 6.0);
  EXPECT_NEAR(s.A_next, 9.0, 1e-14);
  EXPECT_NEAR(s.beta, 1.0, 1e-14);
  EXPECT_NEAR(s.gamma, 3.0, 1e-14);
  EXPECT_NEAR(s.tau, 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(next_schedule(p, 12.0).A_next, 16.0, 1e-14);
}

TEST(Schedule, LargerRootWithStrongConvexity) {
  RapgParams p = convex_unit();
  p.mu = 0.04;  // (mu - rho) / (theta L - rho) = 0.04
  const ScheduleStep s = next_schedule(p, 5.0);
  // 0.96 A^2 - 11 A + 25 = 0 has roots 25/8 and 25/3.
  EXPECT_NEAR(s.A_next, 25.0 / 3.0, 1e-13);
  EXPECT_LE(schedule_root_residual(p, 5.0, s.A_next), 1e-14);
}

TEST(Schedule, ValidateConditionI) {
  RapgParams p;
  p.L = 5.0;
  p.mu = 0.8;
  p.rho = 0.002;
  p.theta = default_theta(p.L, p.mu, p.rho, 1.0);
  const ConditionReport r = validate_params(p);
  EXPECT_EQ(r.applicable, Condition::kI);
  EXPECT_TRUE(r.satisfied);
  EXPECT_FALSE(r.theta_at_bound);
}

TEST(Schedule, ValidateConditionII) {
  RapgParams p = convex_unit(4.0);
  p.mu = p.rho = 0.5;
  p.xi = 2.0;
  p.A0 = 3.0;
  p.theta = 1.5;
  const ConditionReport r = validate_params(p);
  EXPECT_EQ(r.applicable, Condition::kII);
  EXPECT_NEAR(r.theta_lower, p.rho / p.L, 1e-15);
  EXPECT_NEAR(r.A1_lower, 49.0 / 9.0, 1e-14);
}

TEST(Schedule, ValidateConditionIII) {
  RapgParams p = convex_unit(2.0);
  p.delta = 0.6;
  p.xi = 1.4;  // zeta + (zeta - delta) / (lambda - 1) with lambda = 2
  p.A0 = 5.0;
  const ConditionReport r = validate_params(p);
  EXPECT_EQ(r.applicable, Condition::kIII);
  // (4 xi / 2 - 1)^2 / (4 / 2 - 1)^2 with mu = rho.
  EXPECT_NEAR(r.A1_lower, 1.8 * 1.8, 1e-14);
}

TEST(Schedule, ValidateRejects) {
  RapgParams p = convex_unit();
  p.mu = 1.0;
  EXPECT_THROW(validate_params(p), InvalidParams);
  p = convex_unit();
  p.xi = 2.0;
  p.A0 = 1.0;  // needs A0 > 2
  EXPECT_THROW(validate_params(p), InvalidParams);
  p = convex_unit();
  p.rho = 0.5;
  EXPECT_THROW(validate_params(p), InvalidParams);  // mu < rho
}

TEST(Schedule, ThetaAtBoundBreaksA0Requirement) {
  // With theta L = rho + (mu - rho) xi the A0 bound has a zero denominator,
  // so the max-form theta is only admissible when it is strictly above the bound.
  RapgParams p;
  p.L = 1.0;
  p.mu = 0.9;
  p.rho = 0.1;
  p.xi = 1.25;
  p.A0 = 1e6;
  p.theta = default_theta(p.L, p.mu, p.rho, p.xi);
  EXPECT_NEAR(p.theta, 1.1, 1e-15);
  EXPECT_THROW(validate_params(p), InvalidParams);
}

TEST(Schedule, ClampRaisesMu) {
  RapgParams p = convex_unit();
  p.mu = -0.3;
  p.rho = 0.1;
  std::vector<std::string> notes;
  const RapgParams q = clamp_params(p, &notes);
  EXPECT_DOUBLE_EQ(q.mu, 0.1);
  ASSERT_EQ(notes.size(), 1u);
}

TEST(Schedule, D11) {
  RapgParams p = convex_unit();
  EXPECT_TRUE(check_D11(next_schedule(p, 0.1), p));
  EXPECT_DOUBLE_EQ(d11_margin(next_schedule(p, 3.0), p), 0.0);

  p.xi = 2.0;
  ScheduleStep s;
  s.A_next = 49.0 / 9.0;
  s.G_next = schedule_G(p, s.A_next);
  s.E_next = schedule_E(p, s.A_next);
  EXPECT_NEAR(d11_margin(s, p), 0.0, 1e-12);
  EXPECT_TRUE(check_D11(s, p));
  s.A_next = 4.0;
  s.E_next = schedule_E(p, s.A_next);
  EXPECT_FALSE(check_D11(s, p));
}

TEST(Schedule, GrowthBounds) {
  RapgParams p = convex_unit();
  p.A0 = 2.0;
  const double A1 = next_schedule(p, 2.0).A_next;
  EXPECT_NEAR(A1, 4.0, 1e-14);
  EXPECT_GE(A1, std::pow(std::sqrt(2.0) + 0.5, 2));
  EXPECT_TRUE(growth_check({2.0, A1}, p).ok);
  EXPECT_FALSE(growth_check({2.0, 2.5}, p).ok);

  p.mu = 0.2;
  std::vector<double> A{p.A0};
  for (int k = 0; k < 1000 && A.back() < 1e300; ++k) A.push_back(next_schedule(p, A.back()).A_next);
  EXPECT_TRUE(growth_check(A, p).ok);
}

TEST(Schedule, InvariantsOnRandomParams) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    RapgParams p;
    p.L = 0.1 + 10 * U(rng);
    p.rho = 0.2 * p.L * U(rng);
    p.mu = p.rho + (p.L - p.rho) * U(rng) * 0.99;
    p.theta = default_theta(p.L, p.mu, p.rho, 1.0) * (1.0 + U(rng));
    p.A0 = 1e-3 + U(rng);
    double A = p.A0;
    for (int k = 0; k < 2000 && A < 1e300; ++k) {
      const ScheduleStep s = next_schedule(p, A);
      ASSERT_GT(s.A_next, A);
      ASSERT_GT(s.beta, 0.0);
      ASSERT_LE(s.beta, 1.0);
      ASSERT_GT(s.gamma, 1.0);
      ASSERT_GT(s.tau, 0.0);
      ASSERT_LT(s.tau, 1.0);
      ASSERT_LE(schedule_root_residual(p, A, s.A_next), 1e-9);
      A = s.A_next;
    }
  }
}
