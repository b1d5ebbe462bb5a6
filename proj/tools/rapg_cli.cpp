// Command line driver: data generation, single experiments, the
// slope-vs-condition-number study and multi-seed comparisons.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rapg/bench/config.hpp"
#include "rapg/bench/csv.hpp"
#include "rapg/bench/data.hpp"
#include "rapg/bench/experiment.hpp"
#include "rapg/errors.hpp"

namespace {

using namespace rapg;
using namespace rapg::bench;

// Flags are parsed into strings so that a --config file can supply defaults
// and only explicitly given flags override it.
struct Flags {
  std::string config;
  std::map<std::string, std::string> kv;
};

void add_experiment_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value config file");
  auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.kv[key] = v; },
                                          help);
  };
  opt("--model", "model", "spca-sphere | spca-oblique | euclidean-lasso | sphere-quadratic");
  opt("--m", "m", "rows of the data matrix");
  opt("--n", "n", "ambient dimension");
  opt("--p", "p", "columns (oblique model)");
  opt("--lambda", "lambda", "l1 weight");
  opt("--c", "c", "spectral gap knob");
  opt("--seed", "seed", "first seed");
  opt("--seeds", "seeds", "number of seeds to average over");
  opt("--algos", "algos", "comma list of rpg, rapg, ar-rapg");
  opt("--L-mode", "L_mode", "5hess | 2d2 | 1.2d2 | manual");
  opt("--L", "L", "Lipschitz constant for manual mode");
  opt("--mu", "mu", "strong convexity override");
  opt("--rho", "rho", "weak convexity override");
  opt("--xi", "xi", "xi");
  opt("--A0", "A0", "initial A");
  opt("--max-iters", "max_iters", "iteration cap (default 10000)");
  opt("--tol", "tol", "stop once (L ||eta||)^2 < tol n p (default 1e-10)");
  opt("--reference", "reference", "none | rpg | solver");
  opt("--prox-tol", "prox_tol", "inner solver tolerance");
  opt("--out", "out", "output directory");
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  apply_key_values(cfg, f.kv);
  cfg.validate();
  return cfg;
}

void write_matrix(const std::filesystem::path& path, const Matrix& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << fmt(M(i, j));
    out << '\n';
  }
}

int cmd_gen(const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty()) throw ConfigError("gen needs --out");
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  switch (cfg.model) {
    case Model::kSpcaSphere: {
      const SphereData d = gen_spca_sphere_data(cfg.m, cfg.n, cfg.c, cfg.seed);
      write_matrix(dir / "A.csv", d.A);
      write_matrix(dir / "V.csv", d.V);
      write_matrix(dir / "x0.csv", init_point_sphere(d.A, cfg.seed + 1));
      break;
    }
    case Model::kSpcaOblique: {
      const ObliqueData d = gen_spca_oblique_data(cfg.m, cfg.n, cfg.p, cfg.seed);
      write_matrix(dir / "A.csv", d.A);
      write_matrix(dir / "d2.csv", d.d2);
      write_matrix(dir / "x0.csv", d.V);
      break;
    }
    case Model::kEuclideanLasso: {
      const LassoData d = gen_lasso_data(cfg.m, cfg.n, cfg.seed);
      write_matrix(dir / "B.csv", d.B);
      write_matrix(dir / "b.csv", d.b);
      break;
    }
    case Model::kSphereQuadratic:
      throw ConfigError("sphere-quadratic has no data matrix");
  }
  std::cout << "wrote data to " << dir.string() << "\n";
  return 0;
}

void print_averages(const ExperimentResult& r) {
  std::cout << std::left << std::setw(10) << "method" << std::setw(8) << "runs" << std::setw(14)
            << "iterations" << std::setw(12) << "time_s" << std::setw(12) << "sparsity"
            << "final_F\n";
  for (const auto& a : r.averages) {
    std::cout << std::setw(10) << to_string(a.method) << std::setw(8) << a.runs << std::setw(14)
              << a.iterations << std::setw(12) << a.elapsed_s << std::setw(12) << a.sparsity
              << std::setprecision(12) << a.final_F << std::setprecision(6) << "\n";
  }
}

int cmd_run(const ExperimentConfig& cfg) {
  const ExperimentResult r = run_experiment(cfg);
  for (const auto& o : r.runs) {
    for (const auto& w : o.record.warnings) {
      std::cerr << "warning [" << to_string(o.method) << " seed " << o.seed << "]: " << w << "\n";
    }
  }
  print_averages(r);
  return 0;
}

int cmd_compare(ExperimentConfig cfg, const std::vector<int>& ns) {
  const std::vector<int> dims = ns.empty() ? std::vector<int>{cfg.n} : ns;
  const std::string root = cfg.out_dir;
  for (int n : dims) {
    cfg.n = n;
    if (!root.empty()) cfg.out_dir = root + "/n" + std::to_string(n);
    std::cout << "n = " << n << "\n";
    print_averages(run_experiment(cfg));
  }
  return 0;
}

int cmd_slope(const SlopeStudyConfig& cfg) {
  const SlopeStudyResult r = run_slope_study(cfg);
  std::cout << std::left << std::setw(12) << "c" << std::setw(14) << "kappa" << std::setw(14)
            << "rapg_1/(1-e^s)" << std::setw(14) << "rpg_1/(1-e^s)" << "ref_ok\n";
  for (const auto& p : r.points) {
    std::cout << std::setw(12) << p.c << std::setw(14) << p.rapg.kappa << std::setw(14)
              << p.rapg.transformed << std::setw(14) << p.rpg.transformed
              << (p.reference_converged ? "yes" : "no") << "\n";
  }
  std::cout << "log-log slope vs kappa: rapg " << r.rapg_loglog.slope << ", rpg "
            << r.rpg_loglog.slope << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian accelerated proximal gradient experiments"};
  app.require_subcommand(1);

  Flags gen_flags, run_flags, cmp_flags;
  auto* gen = app.add_subcommand("gen", "generate and write test data");
  add_experiment_flags(gen, gen_flags);
  auto* run = app.add_subcommand("run", "run the selected algorithms and write traces");
  add_experiment_flags(run, run_flags);
  auto* compare = app.add_subcommand("compare", "average several seeds, optionally over n values");
  add_experiment_flags(compare, cmp_flags);
  std::vector<int> cmp_ns;
  compare->add_option("--n-list", cmp_ns, "dimensions to sweep")->delimiter(',');

  SlopeStudyConfig scfg;
  int c_count = 20;
  auto* slope = app.add_subcommand("slope", "convergence slope against condition number");
  slope->add_option("--m", scfg.m, "rows of A")->capture_default_str();
  slope->add_option("--n", scfg.n, "dimension")->capture_default_str();
  slope->add_option("--lambda", scfg.lambda, "l1 weight")->capture_default_str();
  slope->add_option("--rho", scfg.rho, "weak convexity constant")->capture_default_str();
  slope->add_option("--c-count", c_count, "log-spaced c values in [0.01, 1]")->capture_default_str();
  slope->add_option("--c-values", scfg.c_values, "explicit c values")->delimiter(',');
  slope->add_option("--seed", scfg.seed, "data seed")->capture_default_str();
  slope->add_option("--max-iters", scfg.max_iters, "iteration cap")->capture_default_str();
  slope->add_option("--tol", scfg.tol, "eta tolerance")->capture_default_str();
  slope->add_option("--out", scfg.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(resolve(gen_flags));
    if (*run) return cmd_run(resolve(run_flags));
    if (*compare) {
      ExperimentConfig cfg = resolve(cmp_flags);
      const bool seeds_given = cmp_flags.kv.count("seeds") ||
                               (!cmp_flags.config.empty() && read_key_values(cmp_flags.config).count("seeds"));
      if (!seeds_given) cfg.seeds = 10;
      return cmd_compare(cfg, cmp_ns);
    }
    if (*slope) {
      if (scfg.c_values.empty()) scfg.c_values = logspace(0.01, 1.0, c_count);
      return cmd_slope(scfg);
    }
  } catch (const rapg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
