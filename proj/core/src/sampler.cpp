#include "mfc/sampler.hpp"

#include <stdexcept>

namespace mfc {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");
}

struct RolloutSums {
  double reward = 0.0;
  double cost = 0.0;
};

// Accumulates r and c from (x, u) at time t, stopping after each step with
// probability 1 - gamma.
RolloutSums rollout(MeanFieldPath& path, std::size_t t, StateId x, ActionId u, double gamma, Rng& rng) {
  RolloutSums sums;
  for (;;) {
    sums.reward += path.reward(t, x, u);
    sums.cost += path.cost(t, x, u);
    if (rng.bernoulli(1.0 - gamma)) return sums;
    x = sample(path.transition(t, x, u), rng);
    ++t;
    u = sample(path.policy(t, x), rng);
  }
}

}  // namespace

OccupancySample sample_occupancy(MeanFieldPath& path, double gamma, Rng& rng) {
  check_gamma(gamma);
  std::size_t t = 0;
  StateId x = sample(path.mu(0), rng);
  ActionId u = sample(path.policy(0, x), rng);
  while (!rng.bernoulli(1.0 - gamma)) {
    x = sample(path.transition(t, x, u), rng);
    ++t;
    u = sample(path.policy(t, x), rng);
  }
  return OccupancySample{x, path.mu(t), u, t};
}

OccupancySample sample_occupancy(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env,
                                 double gamma, Rng& rng) {
  MeanFieldPath path(env, pi, mu0);
  return sample_occupancy(path, gamma, rng);
}

AdvantageEstimate estimate_advantage(MeanFieldPath& path, const OccupancySample& sample, double lambda, double gamma,
                                     Rng& rng) {
  check_gamma(gamma);
  AdvantageEstimate est;
  est.q_branch = rng.bernoulli(0.5);
  const ActionId first = est.q_branch ? sample.u : mfc::sample(path.policy(sample.t, sample.x), rng);
  const RolloutSums sums = rollout(path, sample.t, sample.x, first, gamma, rng);
  const double sign = est.q_branch ? 2.0 : -2.0;
  est.a_hat_r = sign * sums.reward;
  est.a_hat_c = sign * sums.cost;
  est.a_hat_lambda = est.a_hat_r - lambda * est.a_hat_c;
  est.v_hat_c = est.q_branch ? 0.0 : 2.0 * sums.cost;
  return est;
}

AdvantageEstimate estimate_advantage(const OccupancySample& sample, const Policy& pi, double lambda,
                                     const EnvironmentSpec& env, double gamma, Rng& rng) {
  MeanFieldPath path(env, pi, sample.mu);
  OccupancySample rebased = sample;
  rebased.t = 0;
  return estimate_advantage(path, rebased, lambda, gamma, rng);
}

double estimate_constraint_value(MeanFieldPath& path, double gamma, Rng& rng) {
  check_gamma(gamma);
  const StateId x = sample(path.mu(0), rng);
  const ActionId u = sample(path.policy(0, x), rng);
  return rollout(path, 0, x, u, gamma, rng).cost;
}

double estimate_constraint_value(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env,
                                 double gamma, Rng& rng) {
  MeanFieldPath path(env, pi, mu0);
  return estimate_constraint_value(path, gamma, rng);
}

}  // namespace mfc
