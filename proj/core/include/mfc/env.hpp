#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "mfc/rng.hpp"
#include "mfc/simplex.hpp"

namespace mfc {

using RewardFn = std::function<double(StateId, ActionId, const StateDistribution&, const ActionDistribution&)>;
using TransitionFn =
    std::function<StateDistribution(StateId, ActionId, const StateDistribution&, const ActionDistribution&)>;

/// Bound and Lipschitz constants declared by the environment author.
/// Lipschitz constants are with respect to |mu1 - mu2|_1 + |nu1 - nu2|_1.
struct EnvConstants {
  double m_r = 0.0;  // sup |reward|
  double m_c = 0.0;  // sup |cost|
  double l_r = 0.0;
  double l_c = 0.0;
  double l_p = 0.0;  // transition kernel, measured in L1
};

/// A homogeneous mean-field environment: per-agent reward, cost and
/// transition kernel, each depending on the agent's own (state, action) and
/// on the population's state and action distributions.
struct EnvironmentSpec {
  std::string name;
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  RewardFn reward;
  RewardFn cost;
  TransitionFn transition;
  EnvConstants constants;
};

// Product-quality firms model.
struct FirmsEnvConfig {
  std::size_t q = 10;
  double alpha_r = 1.0;
  double beta_r = 0.5;
  double lambda_r = 0.5;
  double lambda_c = 1.0;

  void validate() const;
};

/// Exact law of floor(chi * headroom) for chi ~ U[0, 1), written into a
/// vector of length `n` starting at offset `from`. Probability of increment k
/// is min((k+1)/c, 1) - k/c; headroom 0 yields the delta at `from`.
std::vector<double> floor_uniform_kernel(double headroom, std::size_t from, std::size_t n);

/// Firms environment: states {0..q-1} are quality levels, action 1 invests.
///
/// Declared constants (derived analytically for nonnegative coefficients):
///   M_R = max(alpha_r (q-1), beta_r (q-1) + lambda_r),  M_C = lambda_c
///   L_R = beta_r (q-1)/2      since |mean(mu1) - mean(mu2)| <= (q-1)/2 |mu1 - mu2|_1
///   L_C = 0
///   L_P = q-1                 the kernel moves by at most 2 floor(c)/c^2 <= 2 in L1 per
///                             unit of headroom c (and not at all while c < 1), and
///                             |dc/dmean| <= 1
EnvironmentSpec firms_env(const FirmsEnvConfig& cfg);

// Ring of sites where moving is harder into crowded sites.
struct CongestionEnvConfig {
  std::size_t sites = 3;
  double move_prob = 0.8;   // success probability into an empty site
  double crowding = 0.1;    // success drops by crowding * mu(target)
  double crowd_penalty = 0.5;
  double move_cost = 1.0;

  void validate() const;
};

/// Congestion environment: action 1 tries to move from x to x+1 (mod sites).
/// Reward 1[x == 0] - crowd_penalty * mu(x); cost move_cost * u.
///
/// Declared constants:
///   M_R = max(1, crowd_penalty),  M_C = move_cost
///   L_R = crowd_penalty / 2       because |dmu(x)| <= |dmu|_1 / 2
///   L_C = 0,  L_P = crowding      the kernel moves 2 crowding |dmu(y)| in L1
/// With small crowding the mean-field map is a contraction for moderate
/// discounts, unlike the firms model.
EnvironmentSpec congestion_env(const CongestionEnvConfig& cfg);

struct LipschitzReport {
  double max_ratio_r = 0.0;
  double max_ratio_c = 0.0;
  double max_ratio_p = 0.0;
  bool violation_r = false;
  bool violation_c = false;
  bool violation_p = false;
  std::size_t trials = 0;

  bool ok() const { return !violation_r && !violation_c && !violation_p; }
};

/// Samples (x, u, mu1, mu2, nu1, nu2) tuples and reports the largest observed
/// ratio |f(.., mu1, nu1) - f(.., mu2, nu2)| / (|mu1-mu2|_1 + |nu1-nu2|_1) for
/// reward, cost and transition. Half the trials use independent random pairs,
/// half use small perturbations, which is where worst-case slopes show up.
LipschitzReport validate_lipschitz(const EnvironmentSpec& env, std::size_t trials, Rng& rng);

}  // namespace mfc
