#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rapg/bench/config.hpp"
#include "rapg/bench/slope.hpp"
#include "rapg/restart.hpp"

namespace rapg::bench {

/// Worker count from RAPG_WORKERS, defaulting to the hardware concurrency.
int worker_count();

/// Runs fn(0..tasks-1) on a pool of `workers` threads; rethrows the first error.
void parallel_for(int tasks, int workers, const std::function<void(int)>& fn);

struct ReferenceMinimum {
  Matrix x_star;
  double F_star = 0.0;
  Method method = Method::kArRapg;
  /// theta L ||eta|| of a proximal step from x_star.
  double residual = 0.0;
  bool converged = false;
};

/// Best of AR-RAPG and RPG run to theta L ||eta|| <= target (the two runs
/// use at most `budget` iterations each).
ReferenceMinimum reference_minimum(const CompositeObjective& obj, const Matrix& x0,
                                   const RapgParams& p, int budget = 20000, double target = 1e-10);

struct Instance {
  CompositeObjective obj;
  Matrix x0;
  RapgParams params;
  std::optional<ReferenceMinimum> reference;
  std::vector<std::string> notes;
};

/// Data, objective, initial point and constants for one seed.
Instance build_instance(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunOutcome {
  Method method = Method::kRpg;
  std::uint64_t seed = 0;
  RunRecord record;
  RapgParams params;
  double final_safeguard_eta = 0.0;  // AR-RAPG only
  std::optional<double> F_ref;
  /// Set when the run left the non-antipodal domain; the record is then empty
  /// and the run is left out of the averages.
  std::optional<std::string> domain_error;
};

struct MethodAverage {
  Method method = Method::kRpg;
  double iterations = 0.0;
  double elapsed_s = 0.0;
  double sparsity = 0.0;
  double final_F = 0.0;
  int runs = 0;
};

struct ExperimentResult {
  std::vector<RunOutcome> runs;  // ordered by seed, then by cfg.algorithms
  std::vector<MethodAverage> averages;
};

/// Runs every configured algorithm on every seed. RPG runs first on each
/// seed so that its minimum can serve as the accelerated methods' reference.
/// A run that raises AntipodalPoints is recorded with domain_error instead of
/// aborting the experiment. Writes CSV artifacts when cfg.out_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SlopeStudyConfig {
  int m = 20;
  int n = 1000;
  double lambda = 1e-4;
  double rho = 0.002;
  std::vector<double> c_values;  // empty: 20 log-spaced values in [0.01, 1]
  std::uint64_t seed = 1;
  int max_iters = 10000;
  double tol = 1e-10;
  int reference_budget = 20000;
  std::string out_dir;
};

struct SlopePoint {
  double c = 0.0;
  RapgParams params;
  double F_star = 0.0;
  bool reference_converged = false;
  double reference_residual = 0.0;
  SlopeFit rapg;
  SlopeFit rpg;
  int rapg_iters = 0;
  int rpg_iters = 0;
};

struct SlopeStudyResult {
  std::vector<SlopePoint> points;
  /// log(1 / (1 - e^s)) against log(kappa).
  LineFit rapg_loglog;
  LineFit rpg_loglog;
};

std::vector<double> logspace(double lo, double hi, int count);

SlopeStudyResult run_slope_study(const SlopeStudyConfig& cfg);

}  // namespace rapg::bench
