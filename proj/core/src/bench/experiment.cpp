#include "rapg/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "rapg/bench/csv.hpp"
#include "rapg/bench/data.hpp"
#include "rapg/errors.hpp"

namespace rapg::bench {
namespace {

constexpr double kReferenceProxTol = 1e-13;

ProxOptions prox_options(double tol) {
  ProxOptions o;
  if (tol > 0.0) o.tol = tol;
  return o;
}

RapgParams make_params(double L, double mu, double rho, double xi, double A0) {
  RapgParams p;
  p.L = L;
  p.mu = mu;
  p.rho = rho;
  p.xi = xi;
  p.A0 = A0;
  p.theta = default_theta(L, mu, rho, xi);
  return p;
}

// Hessian-based constants for the sphere model at x; mu is clamped to rho.
RapgParams sphere_params(const Matrix& A, const Matrix& x, double rho, double xi, double A0,
                         const std::optional<double>& mu_override, std::vector<std::string>* notes) {
  const HessianExtremes ext = spca_sphere_hessian_extremes(A, x);
  double mu = mu_override ? *mu_override : ext.lambda_min;
  if (mu < rho) {
    if (notes) {
      std::ostringstream os;
      os << "mu = " << mu << " clamped to rho = " << rho;
      notes->push_back(os.str());
    }
    mu = rho;
  }
  return make_params(5.0 * ext.lambda_max, mu, rho, xi, A0);
}

double prox_residual(const CompositeObjective& obj, const Matrix& x, const RapgParams& p,
                     const ProxOptions& prox) {
  const Manifold& M = obj.manifold();
  const double c = p.theta * p.L;
  ProxProblem pp{M, x, obj.f->riem_grad(x), c, obj.lambda, p.rho};
  return c * solve(pp, prox).eta.norm();
}

std::string seed_meta(const ExperimentConfig& cfg, std::uint64_t seed, Method m) {
  std::ostringstream os;
  os << "model=" << to_string(cfg.model) << " seed=" << seed << " algo=" << to_string(m);
  return os.str();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("RAPG_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int tasks, int workers, const std::function<void(int)>& fn) {
  if (tasks <= 0) return;
  workers = std::clamp(workers, 1, tasks);
  if (workers == 1) {
    for (int i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next.store(tasks);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ReferenceMinimum reference_minimum(const CompositeObjective& obj, const Matrix& x0,
                                   const RapgParams& p, int budget, double target) {
  if (budget < 1) throw InvalidParams("reference budget must be positive");
  const double np = static_cast<double>(obj.manifold().ambient_dim());
  Termination term;
  term.max_iters = budget;
  // theta L ||eta|| <= target/2 through the (L ||eta||)^2 < tol n p test; the
  // margin absorbs the difference between the last step and a fresh prox.
  term.tol = 0.25 * target * target / (p.theta * p.theta * np);
  const ProxOptions prox = prox_options(kReferenceProxTol * std::sqrt(np));

  const ArRapgRecord ar = ar_rapg_run(x0, p, SafeguardConfig{}, obj, prox, term);
  const RunRecord rpg = run(Method::kRpg, x0, p, obj, prox, term);

  ReferenceMinimum out;
  const bool ar_wins = ar.final_F <= rpg.final_F;
  out.method = ar_wins ? Method::kArRapg : Method::kRpg;
  out.x_star = ar_wins ? ar.x_final : rpg.x_final;
  out.F_star = ar_wins ? ar.final_F : rpg.final_F;
  out.residual = prox_residual(obj, out.x_star, p, prox);
  out.converged = out.residual <= target;
  return out;
}

Instance build_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Instance inst;
  inst.obj.lambda = cfg.lambda;
  const LMode manual = LMode::kManual;

  switch (cfg.model) {
    case Model::kSpcaSphere: {
      const SphereData data = gen_spca_sphere_data(cfg.m, cfg.n, cfg.c, seed);
      inst.obj.f = std::make_shared<SpcaSphere>(data.A);
      inst.x0 = init_point_sphere(data.A, seed + 1);
      const double rho = cfg.rho.value_or(0.002);
      if (cfg.L_mode == manual) {
        const double mu = std::max(cfg.mu.value_or(rho), rho);
        inst.params = make_params(cfg.L_manual, mu, rho, cfg.xi, cfg.A0);
        break;
      }
      // Constants at x_* need x_*: solve once with constants at x0, refresh at
      // the result and solve again from there.
      RapgParams rough = sphere_params(data.A, inst.x0, rho, cfg.xi, cfg.A0, cfg.mu, nullptr);
      const ReferenceMinimum first = reference_minimum(inst.obj, inst.x0, rough);
      RapgParams refined = sphere_params(data.A, first.x_star, rho, cfg.xi, cfg.A0, cfg.mu, nullptr);
      ReferenceMinimum second = reference_minimum(inst.obj, first.x_star, refined);
      inst.params =
          sphere_params(data.A, second.x_star, rho, cfg.xi, cfg.A0, cfg.mu, &inst.notes);
      if (!second.converged) {
        std::ostringstream os;
        os << "reference minimum not converged, residual " << second.residual;
        inst.notes.push_back(os.str());
      }
      inst.reference = std::move(second);
      break;
    }
    case Model::kSpcaOblique: {
      const ObliqueData data = gen_spca_oblique_data(cfg.m, cfg.n, cfg.p, seed);
      inst.obj.f = std::make_shared<SpcaOblique>(data.A, data.d2);
      inst.x0 = data.V;
      const double d2_fro_sq = data.d2.squaredNorm();
      double L = 2.0 * d2_fro_sq;
      if (cfg.L_mode == LMode::k12D2) L = 1.2 * d2_fro_sq;
      if (cfg.L_mode == manual) L = cfg.L_manual;
      const double rho = cfg.rho.value_or(0.5);
      inst.params = make_params(L, std::max(cfg.mu.value_or(1.0), rho), rho, cfg.xi, cfg.A0);
      break;
    }
    case Model::kEuclideanLasso: {
      const LassoData data = gen_lasso_data(cfg.m, cfg.n, seed);
      inst.obj.f = std::make_shared<LeastSquares>(data.B, data.b);
      inst.x0 = Matrix::Zero(cfg.n, 1);
      Eigen::SelfAdjointEigenSolver<Matrix> es(data.B.transpose() * data.B,
                                               Eigen::EigenvaluesOnly);
      const double rho = cfg.rho.value_or(0.0);
      double L = es.eigenvalues().maxCoeff();
      if (cfg.L_mode == manual) L = cfg.L_manual;
      const double mu = std::max(cfg.mu.value_or(std::max(es.eigenvalues().minCoeff(), 0.0)), rho);
      inst.params = make_params(L, mu, rho, cfg.xi, cfg.A0);
      break;
    }
    case Model::kSphereQuadratic: {
      // f = dist^2(x, p)/2 with p in the open positive orthant; x0 at distance 0.3.
      const Manifold M = Manifold::sphere(cfg.n);
      std::mt19937_64 rng(seed);
      Matrix anchor = M.random_point(rng).cwiseAbs();
      anchor.array() += 1.0 / cfg.n;
      anchor.normalize();
      Matrix v = M.random_tangent(anchor, rng);
      v *= 0.3 / v.norm();
      inst.obj.f = std::make_shared<SquaredDistance>(M, anchor);
      inst.x0 = M.exp(anchor, v);
      const double rho = cfg.rho.value_or(0.05);
      double L = 1.0;
      if (cfg.L_mode == manual) L = cfg.L_manual;
      inst.params = make_params(L, std::max(cfg.mu.value_or(rho), rho), rho, cfg.xi, cfg.A0);
      break;
    }
  }

  if (cfg.reference == ReferenceMode::kSolver && !inst.reference) {
    inst.reference = reference_minimum(inst.obj, inst.x0, inst.params);
  }
  return inst;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int S = cfg.seeds;
  std::vector<std::vector<RunOutcome>> per_seed(S);
  std::vector<std::optional<double>> seed_best(S);
  const ProxOptions prox = prox_options(cfg.prox_tol);
  const bool want_rpg =
      std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Method::kRpg) != cfg.algorithms.end();

  parallel_for(S, worker_count(), [&](int i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const Instance inst = build_instance(cfg, seed);
    Termination base;
    base.max_iters = cfg.max_iters;
    base.tol = cfg.tol;

    std::optional<RunRecord> rpg;
    std::optional<std::string> rpg_error;
    if (want_rpg || cfg.reference == ReferenceMode::kRpg) {
      try {
        rpg = run(Method::kRpg, inst.x0, inst.params, inst.obj, prox, base);
      } catch (const AntipodalPoints& e) {
        rpg_error = e.what();
      }
    }
    std::optional<double> F_ref;
    if (cfg.reference == ReferenceMode::kRpg && rpg) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& r : rpg->rows) lo = std::min(lo, r.F);
      F_ref = lo;
    } else if (cfg.reference == ReferenceMode::kSolver) {
      F_ref = inst.reference->F_star;
    }

    for (Method m : cfg.algorithms) {
      RunOutcome out;
      out.method = m;
      out.seed = seed;
      out.params = inst.params;
      Termination term = base;
      if (m != Method::kRpg) {
        term.F_ref = F_ref;
        out.F_ref = F_ref;
      }
      std::optional<std::string> error = m == Method::kRpg ? rpg_error : std::nullopt;
      try {
        if (m == Method::kRpg) {
          if (rpg) out.record = *rpg;
        } else if (m == Method::kRapg) {
          out.record = run(m, inst.x0, inst.params, inst.obj, prox, term);
        } else {
          const ArRapgRecord ar =
              ar_rapg_run(inst.x0, inst.params, SafeguardConfig{}, inst.obj, prox, term);
          out.final_safeguard_eta = ar.final_safeguard_eta;
          out.record = ar;
        }
      } catch (const AntipodalPoints& e) {
        error = e.what();
      }
      if (error) {
        out.record = RunRecord{};
        out.record.method = m;
        out.domain_error = error;
        out.record.warnings.push_back("run left the bounded domain: " + *error);
      }
      out.record.warnings.insert(out.record.warnings.begin(), inst.notes.begin(), inst.notes.end());
      per_seed[i].push_back(std::move(out));
    }

    double best = F_ref.value_or(std::numeric_limits<double>::infinity());
    for (const auto& o : per_seed[i])
      for (const auto& r : o.record.rows) best = std::min(best, r.F);
    seed_best[i] = best;
  });

  ExperimentResult result;
  for (auto& v : per_seed)
    for (auto& o : v) result.runs.push_back(std::move(o));

  for (Method m : cfg.algorithms) {
    std::vector<double> it, t, sp, fF;
    for (const auto& o : result.runs) {
      if (o.method != m || o.domain_error) continue;
      it.push_back(o.record.iterations);
      t.push_back(o.record.elapsed_s);
      sp.push_back(o.record.sparsity());
      fF.push_back(o.record.final_F);
    }
    result.averages.push_back({m, mean(it), mean(t), mean(sp), mean(fF), static_cast<int>(it.size())});
  }

  if (cfg.out_dir.empty()) return result;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "config.txt", std::ios::binary);
    out << format_config(cfg);
  }

  std::vector<std::vector<std::string>> summary, timing;
  for (const auto& o : result.runs) {
    const std::string tag = std::string(to_string(o.method)) + "_seed" + std::to_string(o.seed);
    const std::string meta = seed_meta(cfg, o.seed, o.method);
    write_trace_csv((dir / ("trace_" + tag + ".csv")).string(), o.record, meta);
    write_timing_csv((dir / ("timing_" + tag + ".csv")).string(), o.record, meta);
    if (o.method == Method::kArRapg) {
      write_safeguard_csv((dir / ("safeguards_" + tag + ".csv")).string(), o.record, meta);
    }

    const std::size_t si = static_cast<std::size_t>(o.seed - cfg.seed);
    const double best = *seed_best[si];
    std::vector<double> k, gap, eta_k, eta;
    for (const auto& r : o.record.rows) {
      if (r.F - best > 0.0) {
        k.push_back(r.k);
        gap.push_back(r.F - best);
      }
      if (r.k > 0) {
        eta_k.push_back(r.k);
        eta.push_back(r.eta_norm);
      }
    }
    write_series_csv((dir / ("fgap_" + tag + ".csv")).string(), meta + " F_best=" + fmt(best), "k",
                     "F_gap", k, gap);
    write_series_csv((dir / ("eta_" + tag + ".csv")).string(), meta, "k", "eta_norm", eta_k, eta);

    const auto& p = o.params;
    summary.push_back({to_string(o.method), std::to_string(o.seed),
                       std::to_string(o.record.iterations),
                       o.domain_error ? "domain_violation" : to_string(o.record.reason),
                       fmt(o.record.final_F), fmt(o.record.sparsity()),
                       std::to_string(o.record.restarts), std::to_string(o.record.prox_calls),
                       std::to_string(o.record.safeguard_F_evals),
                       std::to_string(o.record.monotonicity_violations),
                       fmt(o.final_safeguard_eta), o.F_ref ? fmt(*o.F_ref) : "", fmt(p.L),
                       fmt(p.mu), fmt(p.rho), fmt(p.theta), fmt(p.xi), fmt(p.A0)});
    timing.push_back({to_string(o.method), std::to_string(o.seed), fmt(o.record.elapsed_s)});
  }
  const std::string meta = "model=" + std::string(to_string(cfg.model));
  write_table_csv((dir / "summary.csv").string(), "rapg-summary", meta,
                  {"method", "seed", "iterations", "reason", "final_F", "sparsity", "restarts",
                   "prox_solves", "safeguard_F_evals", "monotonicity_violations",
                   "final_safeguard_eta", "F_ref", "L", "mu", "rho", "theta", "xi", "A0"},
                  summary);
  write_table_csv((dir / "summary_timing.csv").string(), "rapg-summary-timing", meta,
                  {"method", "seed", "elapsed_s"}, timing);
  std::vector<std::vector<std::string>> avg, avg_t;
  for (const auto& a : result.averages) {
    avg.push_back({to_string(a.method), std::to_string(a.runs), fmt(a.iterations), fmt(a.sparsity),
                   fmt(a.final_F)});
    avg_t.push_back({to_string(a.method), std::to_string(a.runs), fmt(a.elapsed_s)});
  }
  write_table_csv((dir / "averages.csv").string(), "rapg-averages", meta,
                  {"method", "runs", "mean_iterations", "mean_sparsity", "mean_final_F"}, avg);
  write_table_csv((dir / "averages_timing.csv").string(), "rapg-averages-timing", meta,
                  {"method", "runs", "mean_elapsed_s"}, avg_t);
  return result;
}

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0) || count < 1) throw InvalidParams("logspace needs positive bounds");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

SlopeStudyResult run_slope_study(const SlopeStudyConfig& cfg) {
  const std::vector<double> cs = cfg.c_values.empty() ? logspace(0.01, 1.0, 20) : cfg.c_values;
  SlopeStudyResult result;
  result.points.resize(cs.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  parallel_for(static_cast<int>(cs.size()), worker_count(), [&](int i) {
    ExperimentConfig ec;
    ec.model = Model::kSpcaSphere;
    ec.m = cfg.m;
    ec.n = cfg.n;
    ec.lambda = cfg.lambda;
    ec.c = cs[i];
    ec.rho = cfg.rho;
    ec.reference = ReferenceMode::kSolver;
    const Instance inst = build_instance(ec, cfg.seed);

    SlopePoint& pt = result.points[i];
    pt.c = cs[i];
    pt.params = inst.params;
    pt.F_star = inst.reference->F_star;
    pt.reference_converged = inst.reference->converged;
    pt.reference_residual = inst.reference->residual;

    Termination term;
    term.max_iters = cfg.max_iters;
    term.tol = cfg.tol;
    const ProxOptions prox;
    const RunRecord rpg = run(Method::kRpg, inst.x0, inst.params, inst.obj, prox, term);
    term.F_ref = pt.F_star;
    const RunRecord rapg = run(Method::kRapg, inst.x0, inst.params, inst.obj, prox, term);
    pt.rapg_iters = rapg.iterations;
    pt.rpg_iters = rpg.iterations;

    auto fit = [&](const RunRecord& rec) {
      try {
        return fit_slope(rec, pt.F_star, inst.params);
      } catch (const Error&) {
        SlopeFit f;
        f.s = f.transformed = nan;
        f.kappa = condition_number(inst.params);
        return f;
      }
    };
    pt.rapg = fit(rapg);
    pt.rpg = fit(rpg);
  });

  auto loglog = [&](bool accelerated) {
    std::vector<double> x, y;
    for (const auto& pt : result.points) {
      const SlopeFit& f = accelerated ? pt.rapg : pt.rpg;
      if (std::isfinite(f.transformed) && f.transformed > 0.0 && f.kappa > 0.0) {
        x.push_back(std::log(f.kappa));
        y.push_back(std::log(f.transformed));
      }
    }
    if (x.size() < 2) return LineFit{nan, nan};
    return ols(x, y);
  };
  result.rapg_loglog = loglog(true);
  result.rpg_loglog = loglog(false);

  if (cfg.out_dir.empty()) return result;
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::ostringstream meta;
  meta << "m=" << cfg.m << " n=" << cfg.n << " lambda=" << fmt(cfg.lambda)
       << " rho=" << fmt(cfg.rho) << " seed=" << cfg.seed;
  std::vector<std::vector<std::string>> rows;
  std::vector<double> kr, tr, kp, tp;
  for (const auto& pt : result.points) {
    rows.push_back({fmt(pt.c), fmt(pt.rapg.kappa), fmt(pt.params.L), fmt(pt.params.mu),
                    fmt(pt.params.theta), fmt(pt.F_star), pt.reference_converged ? "1" : "0",
                    fmt(pt.reference_residual), fmt(pt.rapg.s), fmt(pt.rapg.transformed),
                    std::to_string(pt.rapg_iters), fmt(pt.rpg.s), fmt(pt.rpg.transformed),
                    std::to_string(pt.rpg_iters)});
    if (std::isfinite(pt.rapg.transformed)) {
      kr.push_back(pt.rapg.kappa);
      tr.push_back(pt.rapg.transformed);
    }
    if (std::isfinite(pt.rpg.transformed)) {
      kp.push_back(pt.rpg.kappa);
      tp.push_back(pt.rpg.transformed);
    }
  }
  write_table_csv((dir / "slope.csv").string(), "rapg-slope", meta.str(),
                  {"c", "kappa", "L", "mu", "theta", "F_star", "reference_converged",
                   "reference_residual", "rapg_s", "rapg_transformed", "rapg_iters", "rpg_s",
                   "rpg_transformed", "rpg_iters"},
                  rows);
  write_series_csv((dir / "kappa_rapg.csv").string(), meta.str(), "kappa", "transformed", kr, tr);
  write_series_csv((dir / "kappa_rpg.csv").string(), meta.str(), "kappa", "transformed", kp, tp);
  write_table_csv((dir / "loglog.csv").string(), "rapg-loglog", meta.str(),
                  {"method", "slope", "intercept"},
                  {{"rapg", fmt(result.rapg_loglog.slope), fmt(result.rapg_loglog.intercept)},
                   {"rpg", fmt(result.rpg_loglog.slope), fmt(result.rpg_loglog.intercept)}});
  return result;
}

}  // namespace rapg::bench
