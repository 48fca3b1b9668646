#pragma once

#include <cstddef>

#include "mfc/env.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/policy.hpp"
#include "mfc/rng.hpp"

// Geometric-horizon sampling along the mean-field dynamics. The representative
// agent's state is random; the population distribution mu_t is the
// deterministic mean-field iterate.

namespace mfc {

struct OccupancySample {
  StateId x = 0;
  StateDistribution mu;
  ActionId u = 0;
  std::size_t t = 0;  // stopping time
};

struct AdvantageEstimate {
  double a_hat_r = 0.0;
  double a_hat_c = 0.0;
  double a_hat_lambda = 0.0;  // a_hat_r - lambda * a_hat_c
  // 2 * continuation cost on the V-branch, 0 on the Q-branch: unbiased for
  // V^C(x_T, mu_T).
  double v_hat_c = 0.0;
  bool q_branch = false;
};

/// Draws (x_T, mu_T, u_T) from the discounted occupancy measure: x0 ~ mu0,
/// u0 ~ pi(x0, mu0), then each step stops with probability 1 - gamma before
/// advancing. T is Geometric with mean gamma / (1 - gamma).
OccupancySample sample_occupancy(MeanFieldPath& path, double gamma, Rng& rng);
OccupancySample sample_occupancy(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env,
                                 double gamma, Rng& rng);

/// One-rollout advantage estimate at `sample`. A fair coin picks the branch:
/// the Q-branch continues from (x_T, u_T), the V-branch resamples the first
/// action from pi(x_T, mu_T). The continuation accumulates undiscounted
/// rewards and costs until a (1 - gamma) stop, and the estimate is
/// +2 * sum on the Q-branch and -2 * sum on the V-branch, i.e. 2 (Q^ - V^)
/// with the unselected side set to zero. Both channels share the rollout.
///
/// `path` must be the path that produced `sample` (its time index is reused).
AdvantageEstimate estimate_advantage(MeanFieldPath& path, const OccupancySample& sample, double lambda, double gamma,
                                     Rng& rng);

/// Convenience overload that starts a fresh mean-field path at sample.mu.
AdvantageEstimate estimate_advantage(const OccupancySample& sample, const Policy& pi, double lambda,
                                     const EnvironmentSpec& env, double gamma, Rng& rng);

/// Undiscounted cost over a Geometric(1 - gamma) + 1 step rollout from
/// x0 ~ mu0; its expectation is V^C_inf(mu0, pi).
double estimate_constraint_value(MeanFieldPath& path, double gamma, Rng& rng);
double estimate_constraint_value(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env,
                                 double gamma, Rng& rng);

}  // namespace mfc
