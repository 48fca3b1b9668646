#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "mfc/harness/config.hpp"
#include "mfc/harness/io.hpp"
#include "mfc/harness/run.hpp"

namespace mfc::harness {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mfc_harness_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig tiny_config(const fs::path& dir) {
  auto cfg = parse_config(R"(
[solver]
J = 4
L = 10
[eval]
n_grid = 10, 20
episodes = 2
seeds = 0-2
[invariants]
triples = 200
steps = 20
env_trials = 200
n_agents = 10, 100
[output]
checkpoint_stride = 2
)");
  cfg.output.dir = dir;
  return cfg;
}

TEST(Config, Defaults) {
  const auto cfg = parse_config("");
  EXPECT_EQ(cfg.env.name, "firms");
  EXPECT_EQ(cfg.solver.solver.outer_iters, 100u);
  EXPECT_EQ(cfg.solver.solver.inner_iters, 100u);
  EXPECT_EQ(cfg.solver.solver.eta1, 1e-3);
  EXPECT_EQ(cfg.solver.solver.zeta, 5.0);
  EXPECT_EQ(cfg.eval.n_grid, (std::vector<std::size_t>{50, 100, 200, 500, 1000}));
  EXPECT_EQ(cfg.eval.seeds.size(), 25u);
  EXPECT_EQ(cfg.eval.episodes, 32u);
  EXPECT_FALSE(cfg.output.record_timing);
}

TEST(Config, ParsesValues) {
  const auto cfg = parse_config(R"(
; comment
[env]
name = congestion
sites = 4
crowding = 0.05
mu0 = 0.25, 0.25, 0.25, 0.25
[solver]
eta1 = 0.01
J = 7
gamma = 0.5
tighten_with_bounds = true
[eval]
n_grid = 10,100
seeds = 0-2, 9
[bounds]
l_q = 0.3
[run]
seed = 42
jobs = 3
)");
  EXPECT_EQ(cfg.env.name, "congestion");
  EXPECT_EQ(cfg.env.congestion.sites, 4u);
  EXPECT_EQ(cfg.env.congestion.crowding, 0.05);
  EXPECT_EQ(cfg.env.mu0.size(), 4u);
  EXPECT_EQ(cfg.solver.solver.eta1, 0.01);
  EXPECT_EQ(cfg.solver.solver.outer_iters, 7u);
  EXPECT_TRUE(cfg.solver.tighten_with_bounds);
  EXPECT_EQ(cfg.eval.n_grid, (std::vector<std::size_t>{10, 100}));
  EXPECT_EQ(cfg.eval.seeds, (std::vector<std::uint64_t>{0, 1, 2, 9}));
  EXPECT_EQ(cfg.bounds.l_q, 0.3);
  EXPECT_EQ(cfg.master_seed, 42u);
  EXPECT_EQ(cfg.jobs, 3u);
}

TEST(Config, RejectsUnknownAndInvalid) {
  EXPECT_THROW(parse_config("[nope]\nx = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[solver]\nbogus = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[solver]\neta1 = fast\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[solver]\nJ = 2.5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[eval]\nn_grid = 100, 10\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[eval]\nn_grid =\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[env]\nname = moon\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[bounds]\nzeta0 = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("[solver]\ngamma = 1\n"), std::invalid_argument);
  try {
    parse_config("[output]\ncolour = red\n");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "unknown config key: output.colour");
  }
}

TEST(Config, SeedLists) {
  EXPECT_EQ(parse_seed_list("0-4,7,10-11"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 7, 10, 11}));
  EXPECT_EQ(parse_seed_list(" 3 "), std::vector<std::uint64_t>{3});
  EXPECT_THROW(parse_seed_list("5-2"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list("a"), std::invalid_argument);
  EXPECT_THROW(parse_seed_list(""), std::invalid_argument);
}

TEST(Config, FastModeKeepsFiveSeeds) {
  auto cfg = parse_config("");
  apply_fast_mode(cfg);
  EXPECT_EQ(cfg.eval.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
}

TEST(Config, LoadFromFile) {
  TempDir tmp;
  const auto path = tmp.path() / "cfg.ini";
  std::ofstream(path) << "[run]\nseed = 9\n";
  EXPECT_EQ(load_config(path).master_seed, 9u);
  EXPECT_THROW(load_config(tmp.path() / "missing.ini"), std::runtime_error);
}

TEST(Config, BoundInputsAndZeta) {
  auto cfg = parse_config("[env]\nname = congestion\n[solver]\ngamma = 0.5\n[bounds]\nl_q = 0.2\nn_agents = 400\n");
  const auto env = make_env(cfg);
  const auto in = bound_inputs(cfg, env);
  EXPECT_EQ(in.l_q, 0.2);
  EXPECT_EQ(in.n_agents, 400u);
  EXPECT_EQ(in.n_states, 3u);
  EXPECT_EQ(in.m_r, env.constants.m_r);
  EXPECT_EQ(effective_zeta(cfg, env), 5.0);
  cfg.solver.tighten_with_bounds = true;
  EXPECT_DOUBLE_EQ(effective_zeta(cfg, env), 5.0 - 2.0 * *compute_bounds(in).g_c);

  const auto firms = parse_config("");
  EXPECT_EQ(bound_inputs(firms, make_env(firms)).l_q, policy_class_lipschitz(kDefaultNormBound));
  auto tight = firms;
  tight.solver.tighten_with_bounds = true;
  EXPECT_THROW(effective_zeta(tight, make_env(tight)), std::domain_error);
}

TEST(Io, FormatReal) {
  EXPECT_EQ(format_real(5.0), "5.0");
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(-2.0), "-2.0");
  EXPECT_EQ(format_real(1e-7), "1e-07");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Io, ResultsRoundTrip) {
  TempDir tmp;
  std::vector<ResultRow> rows(3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].seed = i;
    rows[i].n = 10 * (i + 1);
    rows[i].v_n_r = 1.0 / 3.0 + static_cast<double>(i);
    rows[i].v_n_c = 4.999999;
    rows[i].v_inf_r = 12.5;
    rows[i].v_inf_c = 5.0;
    rows[i].error_pct = 0.125;
    rows[i].zeta = 5.0;
    rows[i].error_abs = i == 2;
  }
  const auto path = tmp.path() / "results.csv";
  write_results_csv(path, rows);
  EXPECT_EQ(read_results_csv(path), rows);
  const std::string text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Train, ZeroRatesKeepInitialPolicy) {
  TempDir tmp;
  auto cfg = tiny_config(tmp.path());
  cfg.solver.solver.eta1 = cfg.solver.solver.eta2 = cfg.solver.solver.alpha = 0.0;
  const auto res = run_train(cfg);
  EXPECT_EQ(res.policy, PolicyParams({10, 2}));
  EXPECT_EQ(load_params(tmp.path() / "policy.txt"), PolicyParams({10, 2}));
}

TEST(Train, WritesTraceAndCheckpoints) {
  TempDir tmp;
  const auto cfg = tiny_config(tmp.path());
  const auto res = run_train(cfg);
  EXPECT_EQ(res.trace.rows.size(), 4u);
  EXPECT_TRUE(fs::exists(tmp.path() / "checkpoints" / "phi_000002.txt"));
  EXPECT_TRUE(fs::exists(tmp.path() / "checkpoints" / "phi_000004.txt"));
  EXPECT_FALSE(fs::exists(tmp.path() / "checkpoints" / "phi_000001.txt"));
  EXPECT_EQ(load_params(tmp.path() / "checkpoints" / "phi_000004.txt"), res.policy);
  std::ifstream in(tmp.path() / "trace.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTraceHeader);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    EXPECT_EQ(line.substr(line.rfind(',') + 1), "0.0");  // timing off
  }
  EXPECT_EQ(n, 4u);
}

TEST(Train, DefaultsRunFullLength) {
  TempDir tmp;
  auto cfg = parse_config("");
  cfg.output.dir = tmp.path();
  cfg.output.checkpoint_stride = 0;
  const auto res = run_train(cfg);
  EXPECT_EQ(res.trace.rows.size(), 100u);
  EXPECT_FALSE(fs::exists(tmp.path() / "checkpoints"));
}

TEST(Eval, NeverInvestHasZeroCost) {
  TempDir tmp;
  auto cfg = tiny_config(tmp.path());
  PolicyParams phi({10, 2});
  for (StateId x = 0; x < 10; ++x) {
    phi.at(x, 0, 0) = 50.0;
    phi.at(x, 1, 0) = -50.0;
  }
  const auto rows = run_eval(cfg, phi);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.v_n_c, 0.0);
    EXPECT_LT(r.v_inf_c, 1e-40);
  }
}

TEST(Eval, RowCountOrderAndSharedMeanField) {
  TempDir tmp;
  auto cfg = tiny_config(tmp.path());
  cfg.eval.n_grid = {100};
  cfg.eval.seeds = parse_seed_list("0-24");
  const auto rows = run_eval(cfg, PolicyParams({10, 2}));
  ASSERT_EQ(rows.size(), 25u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].seed, i);
    EXPECT_EQ(rows[i].n, 100u);
    EXPECT_GE(rows[i].error_pct, 0.0);
    EXPECT_EQ(rows[i].v_inf_r, rows[0].v_inf_r);
    EXPECT_EQ(rows[i].v_inf_c, rows[0].v_inf_c);
    EXPECT_EQ(rows[i].runtime_s, 0.0);
    EXPECT_NEAR(rows[i].error_pct, std::abs(rows[i].v_n_r - rows[i].v_inf_r) / std::abs(rows[i].v_inf_r) * 100, 1e-9);
  }
  EXPECT_EQ(read_results_csv(tmp.path() / "results.csv"), rows);
}

TEST(Eval, SeedIsolation) {
  TempDir a, b;
  auto cfg = tiny_config(a.path());
  cfg.eval.seeds = {3, 1, 2};
  const auto r1 = run_eval(cfg, PolicyParams({10, 2}));
  cfg.output.dir = b.path();
  cfg.eval.seeds = {2, 5, 1, 3};
  cfg.jobs = 3;
  const auto r2 = run_eval(cfg, PolicyParams({10, 2}));
  for (const auto& row : r1) {
    const auto it = std::find_if(r2.begin(), r2.end(), [&](const ResultRow& o) { return o.seed == row.seed && o.n == row.n; });
    ASSERT_NE(it, r2.end());
    EXPECT_EQ(*it, row);
  }
  EXPECT_EQ(r1.front().seed, 1u);
}

TEST(Eval, MissingCheckpoint) {
  TempDir tmp;
  EXPECT_THROW(run_eval(tiny_config(tmp.path())), std::runtime_error);
}

TEST(Bounds, GoldenJson) {
  TempDir tmp;
  auto cfg = parse_config(R"(
[solver]
gamma = 0.5
[bounds]
n_agents = 100
m_r = 1
m_c = 1
l_r = 0.1
l_c = 0.1
l_p = 0.1
l_q = 0.1
)");
  cfg.output.dir = tmp.path();
  run_bounds(cfg);
  const auto j = nlohmann::json::parse(slurp(tmp.path() / "bounds.json"));
  EXPECT_TRUE(j["outputs"]["contraction_ok"].get<bool>());
  EXPECT_NEAR(j["outputs"]["G_R"].get<double>(), 3.877538576526185385492672, 1e-11);
  EXPECT_NEAR(j["outputs"]["G_C0"].get<double>(), 2.601497817287290970967276, 1e-11);
  EXPECT_NEAR(j["outputs"]["theorem2_gap"].get<double>(), 23.41348035558561873870548, 1e-10);
  EXPECT_EQ(j["inputs"]["N"].get<std::size_t>(), 100u);
  EXPECT_TRUE(j["policy_L_Q"].is_null());
}

TEST(Bounds, FirmsConstantsReportContractionFailure) {
  TempDir tmp;
  auto cfg = parse_config("");
  cfg.output.dir = tmp.path();
  const auto res = run_bounds(cfg, PolicyParams({10, 2}));
  EXPECT_FALSE(res.outputs.contraction_ok);
  const auto j = nlohmann::json::parse(slurp(tmp.path() / "bounds.json"));
  EXPECT_FALSE(j["outputs"]["contraction_ok"].get<bool>());
  EXPECT_TRUE(j["outputs"]["G_R0"].is_null());
  EXPECT_EQ(j["inputs"]["N"].get<std::size_t>(), 1000u);
  EXPECT_EQ(j["policy_L_Q"].get<double>(), 0.0);
}

TEST(Bounds, CongestionGivesFiniteSpecialCaseWidths) {
  TempDir tmp;
  auto cfg = parse_config("[env]\nname = congestion\n[solver]\ngamma = 0.5\n[bounds]\nl_q = 0.2\n");
  cfg.output.dir = tmp.path();
  const auto res = run_bounds(cfg);
  ASSERT_TRUE(res.outputs.contraction_ok);
  EXPECT_TRUE(std::isfinite(*res.outputs.g_r0));
  EXPECT_TRUE(std::isfinite(*res.outputs.g_c0));
}

TEST(Invariants, TinySuitePasses) {
  TempDir tmp;
  const auto res = run_invariants(tiny_config(tmp.path()));
  EXPECT_TRUE(res.ok());
  const auto j = nlohmann::json::parse(slurp(tmp.path() / "invariants.json"));
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["lipschitz"].size(), 4u);
  EXPECT_EQ(j["concentration"].size(), 8u);
}

TEST(Pipeline, ByteIdenticalReruns) {
  TempDir a, b;
  auto cfg = tiny_config(a.path());
  cfg.master_seed = 7;
  ASSERT_TRUE(run_all(cfg));
  cfg.output.dir = b.path();
  cfg.jobs = 2;
  ASSERT_TRUE(run_all(cfg));
  for (const char* f : {"results.csv", "trace.csv", "bounds.json", "invariants.json", "policy.txt"}) {
    EXPECT_EQ(slurp(a.path() / f), slurp(b.path() / f)) << f;
  }
}

}  // namespace
}  // namespace mfc::harness
