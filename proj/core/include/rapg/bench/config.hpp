#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rapg/solvers.hpp"

namespace rapg::bench {

enum class Model { kSpcaSphere, kSpcaOblique, kEuclideanLasso, kSphereQuadratic };
enum class LMode { k5Hess, k2D2, k12D2, kManual };
/// Which value the accelerated methods use as their early-stop reference.
enum class ReferenceMode { kNone, kRpg, kSolver };

const char* to_string(Model m);
const char* to_string(LMode m);
const char* to_string(ReferenceMode m);
Model parse_model(const std::string& s);
LMode parse_L_mode(const std::string& s);
ReferenceMode parse_reference_mode(const std::string& s);
std::vector<Method> parse_methods(const std::string& csv);

struct ExperimentConfig {
  Model model = Model::kSpcaSphere;
  int m = 20;
  int n = 1000;
  int p = 1;
  double lambda = 1e-4;
  double c = 0.5;
  std::uint64_t seed = 1;
  int seeds = 1;
  std::vector<Method> algorithms = {Method::kRpg, Method::kRapg, Method::kArRapg};
  /// Unset: 5hess for spca-sphere, 2d2 for spca-oblique, exact constants otherwise.
  std::optional<LMode> L_mode;
  double L_manual = 0.0;
  std::optional<double> mu;
  std::optional<double> rho;
  double xi = 1.0;
  double A0 = 1e-3;
  int max_iters = 10000;
  double tol = 1e-10;
  ReferenceMode reference = ReferenceMode::kRpg;
  /// Non-positive selects the prox default.
  double prox_tol = -1.0;
  std::string out_dir;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Flat key=value text; '#' starts a comment. Unknown keys are an error.
std::map<std::string, std::string> read_key_values(const std::string& path);
void apply_key_values(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::string& path);
/// Inverse of load_config, keys in a fixed order.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace rapg::bench
