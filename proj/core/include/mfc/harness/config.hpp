#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfc/bounds.hpp"
#include "mfc/env.hpp"
#include "mfc/npgpd.hpp"
#include "mfc/simplex.hpp"

// Experiment configuration, read from an INI file:
//
//   [env]       name = firms | congestion, model coefficients, mu0
//   [solver]    learning rates, J, L, gamma, zeta, tighten_with_bounds, ...
//   [eval]      n_grid, episodes, tol, seeds
//   [bounds]    n_agents, zeta0, optional constant overrides
//   [invariants] suite sizes
//   [output]    dir, checkpoint_stride, record_timing
//   [run]       seed, jobs
//
// Every key is optional; unknown sections and keys are rejected.

namespace mfc::harness {

struct EnvSection {
  std::string name = "firms";
  FirmsEnvConfig firms;
  CongestionEnvConfig congestion;
  std::vector<double> mu0;  // empty means uniform
};

struct SolverSection {
  SolverConfig solver;
  bool tighten_with_bounds = false;
};

struct EvalSection {
  std::vector<std::size_t> n_grid{50, 100, 200, 500, 1000};
  std::size_t episodes = 32;
  double tol = 1e-6;
  std::vector<std::uint64_t> seeds;  // defaults to 0..24
  std::size_t fast_seeds = 5;
};

struct BoundsSection {
  std::size_t n_agents = 1000;
  double zeta0 = -1.0;
  std::optional<double> zeta1;
  // Overrides for the environment's declared constants.
  std::optional<double> m_r, m_c, l_r, l_c, l_p;
  // Policy Lipschitz constant; defaults to the class-wide bound for the
  // configured norm bound (see policy_class_lipschitz).
  std::optional<double> l_q;
};

struct InvariantsSection {
  std::size_t triples = 10'000;
  std::vector<std::size_t> n_agents{10, 100, 1000};
  std::size_t steps = 200;
  std::size_t env_trials = 10'000;
};

struct OutputSection {
  std::filesystem::path dir = "out";
  std::size_t checkpoint_stride = 10;  // 0 disables intermediate checkpoints
  bool record_timing = false;          // timing columns are 0 unless set
};

struct ExperimentConfig {
  std::uint64_t master_seed = 0;
  std::size_t jobs = 1;
  EnvSection env;
  SolverSection solver;
  EvalSection eval;
  BoundsSection bounds;
  InvariantsSection invariants;
  OutputSection output;

  ExperimentConfig();
  void validate() const;
};

ExperimentConfig parse_config(std::string_view ini_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// "0-4,7,10-11" -> {0,1,2,3,4,7,10,11}
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Keeps only the first eval.fast_seeds seeds.
void apply_fast_mode(ExperimentConfig& cfg);

EnvironmentSpec make_env(const ExperimentConfig& cfg);
StateDistribution initial_distribution(const ExperimentConfig& cfg);

/// Largest L_Q over all parameters with |phi|_inf <= bound: every logit gap
/// lies in [-2 bound, 2 bound], so L_Q <= 4 bound / 4 = bound.
double policy_class_lipschitz(double norm_bound);

/// Bound inputs for the configured environment at n_agents, with overrides.
BoundInputs bound_inputs(const ExperimentConfig& cfg, const EnvironmentSpec& env);

/// Raw zeta, or zeta - 2 G_C (the solver tightening) when tighten_with_bounds.
double effective_zeta(const ExperimentConfig& cfg, const EnvironmentSpec& env);

}  // namespace mfc::harness
