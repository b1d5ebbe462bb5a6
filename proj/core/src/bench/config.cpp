#include "rapg/bench/config.hpp"

#include <fstream>
#include <sstream>

#include "rapg/errors.hpp"

namespace rapg::bench {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace

const char* to_string(Model m) {
  switch (m) {
    case Model::kSpcaSphere: return "spca-sphere";
    case Model::kSpcaOblique: return "spca-oblique";
    case Model::kEuclideanLasso: return "euclidean-lasso";
    case Model::kSphereQuadratic: return "sphere-quadratic";
  }
  return "unknown";
}

const char* to_string(LMode m) {
  switch (m) {
    case LMode::k5Hess: return "5hess";
    case LMode::k2D2: return "2d2";
    case LMode::k12D2: return "1.2d2";
    case LMode::kManual: return "manual";
  }
  return "unknown";
}

const char* to_string(ReferenceMode m) {
  switch (m) {
    case ReferenceMode::kNone: return "none";
    case ReferenceMode::kRpg: return "rpg";
    case ReferenceMode::kSolver: return "solver";
  }
  return "unknown";
}

Model parse_model(const std::string& s) {
  for (Model m : {Model::kSpcaSphere, Model::kSpcaOblique, Model::kEuclideanLasso,
                  Model::kSphereQuadratic}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown model '" + s + "'");
}

LMode parse_L_mode(const std::string& s) {
  for (LMode m : {LMode::k5Hess, LMode::k2D2, LMode::k12D2, LMode::kManual}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown L mode '" + s + "'");
}

ReferenceMode parse_reference_mode(const std::string& s) {
  for (ReferenceMode m : {ReferenceMode::kNone, ReferenceMode::kRpg, ReferenceMode::kSolver}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown reference mode '" + s + "'");
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw ConfigError("no algorithms selected");
  return out;
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1 || p < 1) throw ConfigError("m, n, p must be positive");
  if ((model == Model::kSpcaSphere || model == Model::kSpcaOblique) && !(m < n)) {
    throw ConfigError("SPCA models need m < n");
  }
  if (model == Model::kSpcaOblique && p > m) throw ConfigError("need p <= m");
  if (model != Model::kSpcaOblique && p != 1) throw ConfigError("p > 1 requires the oblique model");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (seeds < 1) throw ConfigError("seeds must be positive");
  if (max_iters < 0) throw ConfigError("max_iters must be nonnegative");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (L_mode == LMode::kManual && !(L_manual > 0.0)) throw ConfigError("manual L mode needs L > 0");
  if (L_mode == LMode::k5Hess && model != Model::kSpcaSphere) {
    throw ConfigError("5hess applies to the spca-sphere model only");
  }
  if ((L_mode == LMode::k2D2 || L_mode == LMode::k12D2) && model != Model::kSpcaOblique) {
    throw ConfigError("d2-based L applies to the oblique model only");
  }
  if (algorithms.empty()) throw ConfigError("no algorithms selected");
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_key_values(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "model") cfg.model = parse_model(v);
    else if (key == "m") cfg.m = static_cast<int>(to_int(key, v));
    else if (key == "n") cfg.n = static_cast<int>(to_int(key, v));
    else if (key == "p") cfg.p = static_cast<int>(to_int(key, v));
    else if (key == "lambda") cfg.lambda = to_double(key, v);
    else if (key == "c") cfg.c = to_double(key, v);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "seeds") cfg.seeds = static_cast<int>(to_int(key, v));
    else if (key == "algos") cfg.algorithms = parse_methods(v);
    else if (key == "L_mode") cfg.L_mode = parse_L_mode(v);
    else if (key == "L") cfg.L_manual = to_double(key, v);
    else if (key == "mu") cfg.mu = to_double(key, v);
    else if (key == "rho") cfg.rho = to_double(key, v);
    else if (key == "xi") cfg.xi = to_double(key, v);
    else if (key == "A0") cfg.A0 = to_double(key, v);
    else if (key == "max_iters") cfg.max_iters = static_cast<int>(to_int(key, v));
    else if (key == "tol") cfg.tol = to_double(key, v);
    else if (key == "reference") cfg.reference = parse_reference_mode(v);
    else if (key == "prox_tol") cfg.prox_tol = to_double(key, v);
    else if (key == "out") cfg.out_dir = v;
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  apply_key_values(cfg, read_key_values(path));
  return cfg;
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "model=" << to_string(cfg.model) << "\n"
     << "m=" << cfg.m << "\n"
     << "n=" << cfg.n << "\n"
     << "p=" << cfg.p << "\n"
     << "lambda=" << cfg.lambda << "\n"
     << "c=" << cfg.c << "\n"
     << "seed=" << cfg.seed << "\n"
     << "seeds=" << cfg.seeds << "\n"
     << "algos=";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    os << (i ? "," : "") << to_string(cfg.algorithms[i]);
  }
  os << "\n";
  if (cfg.L_mode) os << "L_mode=" << to_string(*cfg.L_mode) << "\n";
  if (cfg.L_mode == LMode::kManual) os << "L=" << cfg.L_manual << "\n";
  if (cfg.mu) os << "mu=" << *cfg.mu << "\n";
  if (cfg.rho) os << "rho=" << *cfg.rho << "\n";
  os << "xi=" << cfg.xi << "\n"
     << "A0=" << cfg.A0 << "\n"
     << "max_iters=" << cfg.max_iters << "\n"
     << "tol=" << cfg.tol << "\n"
     << "reference=" << to_string(cfg.reference) << "\n";
  if (cfg.prox_tol > 0.0) os << "prox_tol=" << cfg.prox_tol << "\n";
  if (!cfg.out_dir.empty()) os << "out=" << cfg.out_dir << "\n";
  return os.str();
}

}  // namespace rapg::bench
