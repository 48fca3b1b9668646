#pragma once

#include <cstddef>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/policy.hpp"
#include "mfc/rng.hpp"

namespace mfc {

/// Joint state of N agents. Invariants: N >= 1 and every id < n_states.
class JointState {
 public:
  JointState(std::vector<StateId> states, std::size_t n_states);

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t n_states() const noexcept { return n_states_; }
  const std::vector<StateId>& states() const noexcept { return states_; }
  StateDistribution empirical() const { return empirical_state_dist(states_, n_states_); }

 private:
  std::vector<StateId> states_;
  std::size_t n_states_;
};

struct NAgentStep {
  JointState next;
  double avg_reward = 0.0;
  double avg_cost = 0.0;
  ActionDistribution nu;  // empirical action distribution of this step
};

/// One synchronous step of the N-agent system. Each agent draws its action
/// from pi(x_i, mu^N) independently given mu^N; reward, cost and the
/// transition of every agent are then evaluated at the empirical (mu^N, nu^N).
/// Agents are processed in index order.
NAgentStep step(const JointState& s, const Policy& pi, const EnvironmentSpec& env, Rng& rng);

struct NAgentEstimate {
  double v_r = 0.0;
  double v_c = 0.0;
  double std_err_r = 0.0;
  double std_err_c = 0.0;
  std::size_t episodes = 0;
  std::size_t horizon = 0;
};

inline constexpr std::size_t kDefaultEpisodes = 32;

/// Monte Carlo estimate of the N-agent discounted reward and cost values from
/// x0, truncated at the same horizon mf_values would use. Episode e draws
/// from rng.split(e), so episodes are independent and order-free.
NAgentEstimate estimate_values(const JointState& x0, const Policy& pi, const EnvironmentSpec& env, double gamma,
                               std::size_t episodes, double tol, Rng& rng);

/// N iid draws from mu0.
JointState sample_initial_joint_state(const StateDistribution& mu0, std::size_t n, Rng& rng);

}  // namespace mfc
