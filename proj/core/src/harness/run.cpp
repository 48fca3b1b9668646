#include "mfc/harness/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"

namespace mfc::harness {

namespace {

using nlohmann::ordered_json;

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json checks_json(const InvariantReport& report) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : report.checks) {
    arr.push_back(ordered_json{{"name", c.name},
                               {"n_agents", c.n_agents},
                               {"observed", c.observed},
                               {"bound", c.bound},
                               {"std_err", c.std_err},
                               {"samples", c.samples},
                               {"ok", c.ok}});
  }
  return arr;
}

// Runs task(i) for i in [0, count) on `jobs` threads; rethrows the first error.
template <class Task>
void parallel_for(std::size_t count, std::size_t jobs, Task task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

TrainResult run_train(const ExperimentConfig& cfg) {
  cfg.validate();
  const EnvironmentSpec env = make_env(cfg);
  const StateDistribution mu0 = initial_distribution(cfg);
  SolverConfig solver = cfg.solver.solver;
  solver.zeta = effective_zeta(cfg, env);

  const auto& dir = cfg.output.dir;
  const std::size_t stride = cfg.output.checkpoint_stride;
  std::filesystem::create_directories(dir);
  if (stride != 0) std::filesystem::create_directories(dir / "checkpoints");
  auto checkpoint = [&](const TraceRow& row) {
    if (stride != 0 && row.j % stride == 0) {
      save_params(dir / "checkpoints" / fmt::format("phi_{:06d}.txt", row.j), row.phi);
    }
  };

  Rng rng(derive_seed(cfg.master_seed, {kTrainStream}));
  TrainResult result;
  result.trace = solve(solver, env, mu0, rng, checkpoint);
  result.policy = result.trace.final_params();
  result.zeta = solver.zeta;
  write_trace_csv(dir / "trace.csv", result.trace, cfg.output.record_timing);
  save_params(dir / "policy.txt", result.policy);
  return result;
}

ResultRow eval_cell(const ExperimentConfig& cfg, const EnvironmentSpec& env, const StateDistribution& mu0,
                    const Policy& pi, std::uint64_t seed, std::size_t n, double v_inf_r, double v_inf_c,
                    double zeta) {
  const auto start = std::chrono::steady_clock::now();
  const Rng cell(derive_seed(cfg.master_seed, {kEvalStream, seed, n}));
  Rng init = cell.split(0);
  Rng episodes = cell.split(1);
  const JointState x0 = sample_initial_joint_state(mu0, n, init);
  const NAgentEstimate est =
      estimate_values(x0, pi, env, cfg.solver.solver.gamma, cfg.eval.episodes, cfg.eval.tol, episodes);

  ResultRow row;
  row.seed = seed;
  row.n = n;
  row.v_n_r = est.v_r;
  row.v_n_c = est.v_c;
  row.v_inf_r = v_inf_r;
  row.v_inf_c = v_inf_c;
  row.zeta = zeta;
  const double diff = std::abs(est.v_r - v_inf_r);
  row.error_abs = std::abs(v_inf_r) <= 1e-9;
  row.error_pct = row.error_abs ? diff : diff / std::abs(v_inf_r) * 100.0;
  if (cfg.output.record_timing) {
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

std::vector<ResultRow> run_eval(const ExperimentConfig& cfg, const PolicyParams& policy) {
  cfg.validate();
  const EnvironmentSpec env = make_env(cfg);
  const StateDistribution mu0 = initial_distribution(cfg);
  const SoftmaxPolicy pi(policy);
  const MFValues mf = mf_values(mu0, pi, env, cfg.solver.solver.gamma, cfg.eval.tol);
  const double zeta = effective_zeta(cfg, env);

  std::vector<std::uint64_t> seeds = cfg.eval.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  const auto& grid = cfg.eval.n_grid;

  std::vector<ResultRow> rows(seeds.size() * grid.size());
  parallel_for(rows.size(), cfg.jobs, [&](std::size_t i) {
    rows[i] = eval_cell(cfg, env, mu0, pi, seeds[i / grid.size()], grid[i % grid.size()], mf.v_r, mf.v_c, zeta);
  });
  write_results_csv(cfg.output.dir / "results.csv", rows);
  return rows;
}

std::vector<ResultRow> run_eval(const ExperimentConfig& cfg) {
  const auto path = cfg.output.dir / "policy.txt";
  if (!std::filesystem::exists(path)) throw std::runtime_error("checkpoint not found: " + path.string());
  return run_eval(cfg, load_params(path));
}

BoundsResult run_bounds(const ExperimentConfig& cfg, const std::optional<PolicyParams>& policy) {
  cfg.validate();
  const EnvironmentSpec env = make_env(cfg);
  BoundsResult res;
  res.inputs = bound_inputs(cfg, env);
  res.outputs = compute_bounds(res.inputs);
  if (policy) res.policy_l_q = lipschitz_constant(*policy);

  const auto& in = res.inputs;
  const auto& out = res.outputs;
  ordered_json j;
  j["inputs"] = ordered_json{{"M_R", in.m_r},     {"M_C", in.m_c},       {"L_R", in.l_r},
                             {"L_C", in.l_c},     {"L_P", in.l_p},       {"L_Q", in.l_q},
                             {"gamma", in.gamma}, {"N", in.n_agents},    {"n_states", in.n_states},
                             {"n_actions", in.n_actions}, {"zeta0", in.zeta0}, {"zeta1", optional_json(in.zeta1)}};
  j["outputs"] = ordered_json{{"S_R", out.s_r},
                              {"S_C", out.s_c},
                              {"S_P", out.s_p},
                              {"C_P", out.c_p},
                              {"contraction_ok", out.contraction_ok},
                              {"G_R", optional_json(out.g_r)},
                              {"G_C", optional_json(out.g_c)},
                              {"G_R0", optional_json(out.g_r0)},
                              {"G_C0", optional_json(out.g_c0)},
                              {"theorem1_gap", optional_json(out.theorem1_gap)},
                              {"theorem2_gap", optional_json(out.theorem2_gap)}};
  j["policy_L_Q"] = optional_json(res.policy_l_q);
  write_json(cfg.output.dir / "bounds.json", j);
  return res;
}

InvariantsResult run_invariants(const ExperimentConfig& cfg) {
  cfg.validate();
  const EnvironmentSpec env = make_env(cfg);
  const Rng root(derive_seed(cfg.master_seed, {kInvariantStream}));
  Rng env_rng = root.split(0);
  Rng lip_rng = root.split(1);
  Rng conc_rng = root.split(2);

  InvariantsResult res;
  res.env_constants = validate_lipschitz(env, cfg.invariants.env_trials, env_rng);
  res.lipschitz = lipschitz_suite(env, LipschitzSuiteConfig{cfg.invariants.triples, 1.0}, lip_rng);
  res.concentration =
      concentration_suite(env, ConcentrationSuiteConfig{cfg.invariants.n_agents, cfg.invariants.steps, 1.0}, conc_rng);

  const auto& e = res.env_constants;
  ordered_json j;
  j["env"] = env.name;
  j["env_constants"] = ordered_json{{"trials", e.trials},
                                    {"max_ratio_r", e.max_ratio_r},
                                    {"declared_l_r", env.constants.l_r},
                                    {"max_ratio_c", e.max_ratio_c},
                                    {"declared_l_c", env.constants.l_c},
                                    {"max_ratio_p", e.max_ratio_p},
                                    {"declared_l_p", env.constants.l_p},
                                    {"ok", e.ok()}};
  j["lipschitz"] = checks_json(res.lipschitz);
  j["concentration"] = checks_json(res.concentration);
  j["ok"] = res.ok();
  write_json(cfg.output.dir / "invariants.json", j);
  return res;
}

bool run_all(const ExperimentConfig& cfg) {
  const TrainResult trained = run_train(cfg);
  run_eval(cfg, trained.policy);
  run_bounds(cfg, trained.policy);
  return run_invariants(cfg).ok();
}

}  // namespace mfc::harness
