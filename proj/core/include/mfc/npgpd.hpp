#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/policy.hpp"
#include "mfc/rng.hpp"

namespace mfc {

/// Raised when the inner regression blows up; carries the iteration indices.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t outer, std::size_t inner)
      : std::runtime_error(what), outer_(outer), inner_(inner) {}
  std::size_t outer_iteration() const noexcept { return outer_; }
  std::size_t inner_step() const noexcept { return inner_; }

 private:
  std::size_t outer_;
  std::size_t inner_;
};

struct SolverConfig {
  double eta1 = 1e-3;  // policy step
  double eta2 = 1e-3;  // dual step
  double alpha = 1e-3; // inner SGD step
  std::size_t outer_iters = 100;  // J
  std::size_t inner_iters = 100;  // L
  double gamma = 0.9;
  double zeta = 5.0;
  std::vector<double> w0;               // empty means zeros
  std::optional<PolicyParams> phi0;     // empty means zeros (uniform policy)
  double lambda0 = 0.0;
  std::size_t inner_batch = 1;
  std::size_t dual_batch = 16;
  double norm_bound = kDefaultNormBound;
  // Record exact mean-field values of every iterate in the trace.
  bool evaluate_iterates = true;
  double value_tol = 1e-6;

  void validate() const;
};

struct TraceRow {
  std::size_t j = 0;    // 1-based; row j holds Phi_j and lambda_j
  PolicyParams phi;
  double lambda = 0.0;
  double w_l1 = 0.0;    // |w_{j-1}|_1 used to produce Phi_j
  double v_hat_c = 0.0; // dual-step estimate of V^C at Phi_{j-1}
  double v_inf_r = 0.0; // NaN unless evaluate_iterates
  double v_inf_c = 0.0;
  double wall_s = 0.0;  // elapsed since solve() started
};

struct SolverTrace {
  std::vector<TraceRow> rows;

  const PolicyParams& final_params() const { return rows.back().phi; }
};

struct RegressionSample {
  std::vector<double> g;
  double target = 0.0;
};

/// Averaged SGD on E[(target - w·g)^2]/2: w_{l+1} = w_l - alpha * mean_b (w_l·g - target) g.
/// Returns (1/L) sum_{l=1..L} w_l. Throws SolverError("inner SGD diverged", 0, l)
/// on a non-finite iterate.
std::vector<double> averaged_sgd(std::vector<double> w0, double alpha, std::size_t steps, std::size_t batch,
                                 const std::function<RegressionSample()>& draw);

/// Compatible-function-approximation direction for (phi, lambda): regress the
/// advantage estimate onto the score at occupancy samples.
std::vector<double> inner_sgd(const PolicyParams& phi, double lambda, const SolverConfig& cfg,
                              const EnvironmentSpec& env, const StateDistribution& mu0, Rng& rng);

/// phi + eta1 / (1 - gamma) * w, clipped to the norm bound.
PolicyParams npg_step(const PolicyParams& phi, std::span<const double> w, const SolverConfig& cfg);

/// Projected dual ascent: max(0, lambda + eta2 (v_hat_c - zeta)).
double dual_step(double lambda, double v_hat_c, const SolverConfig& cfg);

using IterationCallback = std::function<void(const TraceRow&)>;

/// Primal-dual natural policy gradient. Iteration j draws from rng.split(j)
/// so a run is a pure function of (cfg, env, mu0, rng seed).
SolverTrace solve(const SolverConfig& cfg, const EnvironmentSpec& env, const StateDistribution& mu0, Rng& rng,
                  const IterationCallback& on_iteration = {});

}  // namespace mfc
