#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfc/bounds.hpp"
#include "mfc/harness/config.hpp"
#include "mfc/harness/io.hpp"
#include "mfc/invariants.hpp"
#include "mfc/npgpd.hpp"
#include "mfc/policy.hpp"

// Experiment pipeline. Each stage writes its artifacts under cfg.output.dir:
//   train       trace.csv, policy.txt, checkpoints/phi_<j>.txt
//   eval        results.csv
//   bounds      bounds.json
//   invariants  invariants.json
//
// Random streams are derived from (master seed, stage tag, ...) so stages and
// evaluation cells never share draws.

namespace mfc::harness {

enum StreamTag : std::uint64_t { kTrainStream = 1, kEvalStream = 2, kInvariantStream = 3 };

struct TrainResult {
  SolverTrace trace;
  PolicyParams policy;  // last iterate
  double zeta = 0.0;    // constraint level used by the solver
};

TrainResult run_train(const ExperimentConfig& cfg);

/// Rows sorted by (seed, N). Cells run on cfg.jobs worker threads.
std::vector<ResultRow> run_eval(const ExperimentConfig& cfg, const PolicyParams& policy);
/// Loads policy.txt from the output directory.
std::vector<ResultRow> run_eval(const ExperimentConfig& cfg);

/// Evaluates one (seed, N) cell against precomputed mean-field values.
ResultRow eval_cell(const ExperimentConfig& cfg, const EnvironmentSpec& env, const StateDistribution& mu0,
                    const Policy& pi, std::uint64_t seed, std::size_t n, double v_inf_r, double v_inf_c,
                    double zeta);

struct BoundsResult {
  BoundInputs inputs;
  BoundOutputs outputs;
  std::optional<double> policy_l_q;  // L_Q of the trained policy, when known
};

BoundsResult run_bounds(const ExperimentConfig& cfg, const std::optional<PolicyParams>& policy = std::nullopt);

struct InvariantsResult {
  LipschitzReport env_constants;
  InvariantReport lipschitz;
  InvariantReport concentration;

  bool ok() const { return env_constants.ok() && lipschitz.ok() && concentration.ok(); }
};

InvariantsResult run_invariants(const ExperimentConfig& cfg);

/// train, eval, bounds and invariants in sequence. Returns false when any
/// invariant check fails.
bool run_all(const ExperimentConfig& cfg);

}  // namespace mfc::harness
