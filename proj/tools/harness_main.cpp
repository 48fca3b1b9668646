#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mfc/harness/config.hpp"
#include "mfc/harness/run.hpp"

namespace h = mfc::harness;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool fast = false;
  bool timing = false;
  std::optional<std::size_t> jobs;
};

h::ExperimentConfig resolve(const Options& o) {
  h::ExperimentConfig cfg = o.config.empty() ? h::ExperimentConfig{} : h::load_config(o.config);
  if (o.seed) cfg.master_seed = *o.seed;
  if (!o.out.empty()) cfg.output.dir = o.out;
  if (o.timing) cfg.output.record_timing = true;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.fast) h::apply_fast_mode(cfg);
  cfg.validate();
  return cfg;
}

void report_train(const h::TrainResult& t) {
  const auto& last = t.trace.rows.back();
  fmt::print("train: {} iterations, zeta={}, lambda={}, V_inf^R={}, V_inf^C={}\n", t.trace.rows.size(),
             h::format_real(t.zeta), h::format_real(last.lambda), h::format_real(last.v_inf_r),
             h::format_real(last.v_inf_c));
}

void report_eval(const std::vector<h::ResultRow>& rows) {
  fmt::print("eval: {} rows written\n", rows.size());
}

void report_bounds(const h::BoundsResult& b) {
  const auto& o = b.outputs;
  fmt::print("bounds: S_P={} contraction_ok={}", h::format_real(o.s_p), o.contraction_ok);
  if (o.g_r) fmt::print(" G_R={} G_C={}", h::format_real(*o.g_r), h::format_real(*o.g_c));
  fmt::print("\n");
}

bool report_invariants(const h::InvariantsResult& r) {
  auto line = [](const mfc::InvariantCheck& c) {
    fmt::print("  {:<22} N={:<5} observed={:<12.6g} bound={:<12.6g} {}\n", c.name, c.n_agents, c.observed, c.bound,
               c.ok ? "ok" : "FAIL");
  };
  fmt::print("invariants: declared env constants {}\n", r.env_constants.ok() ? "ok" : "FAIL");
  for (const auto& c : r.lipschitz.checks) line(c);
  for (const auto& c : r.concentration.checks) line(c);
  return r.ok();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained mean-field control: training, N-agent evaluation and bounds"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "INI experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_flag("--fast", opt.fast, "Evaluate only the first few seeds");
    sub->add_flag("--timing", opt.timing, "Record wall-clock columns (breaks byte-identical reruns)");
    sub->add_option("--jobs", opt.jobs, "Worker threads for evaluation")->check(CLI::PositiveNumber);
  };
  auto* train = app.add_subcommand("train", "Train a policy on the mean-field model");
  auto* eval = app.add_subcommand("eval", "Evaluate the trained policy in N-agent systems");
  auto* bounds = app.add_subcommand("bounds", "Write approximation bound constants");
  auto* invariants = app.add_subcommand("invariants", "Run the Lipschitz and concentration suites");
  auto* all = app.add_subcommand("all", "train, eval, bounds and invariants");
  for (auto* sub : {train, eval, bounds, invariants, all}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const h::ExperimentConfig cfg = resolve(opt);
    if (train->parsed()) {
      report_train(h::run_train(cfg));
    } else if (eval->parsed()) {
      report_eval(h::run_eval(cfg));
    } else if (bounds->parsed()) {
      report_bounds(h::run_bounds(cfg));
    } else if (invariants->parsed()) {
      return report_invariants(h::run_invariants(cfg)) ? 0 : 2;
    } else if (all->parsed()) {
      const auto trained = h::run_train(cfg);
      report_train(trained);
      report_eval(h::run_eval(cfg, trained.policy));
      report_bounds(h::run_bounds(cfg, trained.policy));
      return report_invariants(h::run_invariants(cfg)) ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
