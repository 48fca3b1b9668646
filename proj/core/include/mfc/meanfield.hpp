#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/policy.hpp"
#include "mfc/simplex.hpp"

namespace mfc {

inline constexpr double kDefaultValueTol = 1e-6;
// Horizons beyond this are rejected as "horizon too long".
inline constexpr std::size_t kMaxHorizon = 10'000'000;

/// Population action distribution: nu(u) = sum_x pi(x, mu)(u) mu(x).
ActionDistribution nu_mf(const StateDistribution& mu, const Policy& pi);

/// One step of the deterministic mean-field state map.
StateDistribution p_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env);

/// Population-average reward and cost at mu, with nu = nu_mf(mu, pi).
double r_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env);
double c_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env);

struct MFStep {
  StateDistribution mu;
  ActionDistribution nu;
  double reward = 0.0;
  double cost = 0.0;
};

struct MFTrajectory {
  std::vector<MFStep> steps;
  double gamma = 0.0;

  std::size_t horizon() const noexcept { return steps.size(); }
};

struct MFValues {
  double v_r = 0.0;
  double v_c = 0.0;
  MFTrajectory trajectory;
};

/// Smallest T >= 1 with gamma^T * bound / (1 - gamma) < tol. Throws
/// std::invalid_argument("horizon too long") past kMaxHorizon.
std::size_t truncation_horizon(double gamma, double bound, double tol);

/// Discounted reward and cost values of a stationary policy by exact forward
/// recursion of the mean-field map, truncated by truncation_horizon with
/// bound = max(M_R, M_C).
MFValues mf_values(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env, double gamma,
                   double tol = kDefaultValueTol);

/// Non-stationary variant: step t uses policy_at(t).
using PolicySchedule = std::function<const Policy&(std::size_t t)>;
MFValues mf_values(const StateDistribution& mu0, const PolicySchedule& policy_at, const EnvironmentSpec& env,
                   double gamma, double tol = kDefaultValueTol);

/// Lazily extended mean-field trajectory from a fixed mu0 under a fixed
/// policy, with per-step caches of the policy table, transition kernels and
/// per-(x, u) rewards. Rollouts that follow the representative agent along
/// the deterministic population path share one of these.
///
/// Holds references to `env` and `pi`; both must outlive the path. Not
/// thread-safe; give each worker its own.
class MeanFieldPath {
 public:
  MeanFieldPath(const EnvironmentSpec& env, const Policy& pi, StateDistribution mu0);

  const StateDistribution& mu(std::size_t t) { return at(t).mu; }
  const ActionDistribution& nu(std::size_t t) { return at(t).nu; }
  const ActionDistribution& policy(std::size_t t, StateId x) { return at(t).policy[x]; }
  const StateDistribution& transition(std::size_t t, StateId x, ActionId u);
  double reward(std::size_t t, StateId x, ActionId u);
  double cost(std::size_t t, StateId x, ActionId u);

  const EnvironmentSpec& env() const noexcept { return env_; }
  const Policy& policy() const noexcept { return pi_; }

 private:
  struct Step {
    StateDistribution mu;
    ActionDistribution nu;
    std::vector<ActionDistribution> policy;
    std::vector<std::optional<StateDistribution>> kernels;  // indexed x * |U| + u
    std::vector<double> rewards;                            // NaN until computed
    std::vector<double> costs;
  };

  Step& at(std::size_t t);
  Step make_step(StateDistribution mu) const;

  const EnvironmentSpec& env_;
  const Policy& pi_;
  std::deque<Step> steps_;
};

}  // namespace mfc
