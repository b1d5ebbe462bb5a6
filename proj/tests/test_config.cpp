#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rapg/bench/config.hpp"
#include "rapg/bench/csv.hpp"
#include "rapg/bench/experiment.hpp"
#include "rapg/errors.hpp"

using namespace rapg;
using namespace rapg::bench;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rapg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig cfg;
  cfg.model = Model::kSpcaOblique;
  cfg.m = 20;
  cfg.n = 200;
  cfg.p = 4;
  cfg.lambda = 1.0;
  cfg.L_mode = LMode::k12D2;
  cfg.rho = 0.5;
  cfg.algorithms = {Method::kRapg, Method::kArRapg};
  cfg.out_dir = "out/fig3";
  const auto path = scratch("cfg") / "c.txt";
  std::ofstream(path) << format_config(cfg) << "# trailing comment\n";
  const ExperimentConfig back = load_config(path.string());
  EXPECT_EQ(format_config(back), format_config(cfg));
  EXPECT_NO_THROW(back.validate());
}

TEST(Config, Errors) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_key_values(cfg, {{"bogus", "1"}}), ConfigError);
  EXPECT_THROW(apply_key_values(cfg, {{"m", "2.5"}}), ConfigError);
  EXPECT_THROW(apply_key_values(cfg, {{"algos", "rpg,newton"}}), ConfigError);
  EXPECT_THROW(parse_L_mode("3d2"), ConfigError);

  cfg.m = 50;
  cfg.n = 40;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.L_mode = LMode::k2D2;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ExperimentConfig{};
  cfg.p = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Csv, ShortestRoundTripFormat) {
  EXPECT_EQ(fmt(0.1), "0.1");
  EXPECT_EQ(std::stod(fmt(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Experiment, DeterministicArtifacts) {
  ExperimentConfig cfg;
  cfg.m = 4;
  cfg.n = 30;
  cfg.lambda = 1e-3;
  cfg.seeds = 2;
  cfg.max_iters = 300;
  const auto a = scratch("run_a"), b = scratch("run_b");
  cfg.out_dir = a.string();
  const ExperimentResult ra = run_experiment(cfg);
  cfg.out_dir = b.string();
  run_experiment(cfg);
  ASSERT_EQ(ra.runs.size(), 6u);
  EXPECT_EQ(ra.averages.size(), 3u);
  for (const char* f : {"trace_rapg_seed1.csv", "trace_ar-rapg_seed2.csv", "summary.csv",
                        "averages.csv", "safeguards_ar-rapg_seed1.csv", "fgap_rpg_seed2.csv"}) {
    ASSERT_TRUE(std::filesystem::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const std::string head = slurp(a / "summary.csv").substr(0, 17);
  EXPECT_EQ(head, "# rapg-summary v1");
}

TEST(Experiment, DomainViolationIsRecordedNotThrown) {
  // RAPG with the 2||D2||^2 estimate drifts to an antipodal z on this instance.
  ExperimentConfig cfg;
  cfg.model = Model::kSpcaOblique;
  cfg.m = 10;
  cfg.n = 40;
  cfg.p = 2;
  cfg.lambda = 1.0;
  const ExperimentResult r = run_experiment(cfg);
  ASSERT_EQ(r.runs.size(), 3u);
  for (const auto& o : r.runs) {
    EXPECT_EQ(o.domain_error.has_value(), o.method == Method::kRapg) << to_string(o.method);
  }
  for (const auto& a : r.averages) EXPECT_EQ(a.runs, a.method == Method::kRapg ? 0 : 1);
}

TEST(Experiment, ParallelForPropagatesErrors) {
  std::vector<int> hits(8, 0);
  parallel_for(8, 3, [&](int i) { hits[i] = 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 8);
  EXPECT_THROW(parallel_for(4, 2, [](int i) {
                 if (i == 2) throw DomainError("boom");
               }),
               DomainError);
}

TEST(Experiment, LogSpace) {
  const std::vector<double> c = logspace(0.01, 1.0, 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[1], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(c[2], 1.0);
}
