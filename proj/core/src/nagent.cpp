#include "mfc/nagent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace mfc {

JointState::JointState(std::vector<StateId> states, std::size_t n_states)
    : states_(std::move(states)), n_states_(n_states) {
  if (states_.empty()) throw std::invalid_argument("empty population");
  for (StateId x : states_) {
    if (x >= n_states_) throw std::invalid_argument("invalid state");
  }
}

NAgentStep step(const JointState& s, const Policy& pi, const EnvironmentSpec& env, Rng& rng) {
  if (s.n_states() != env.n_states || pi.n_states() != env.n_states || pi.n_actions() != env.n_actions) {
    throw std::invalid_argument("policy, environment and joint state dimensions disagree");
  }
  const auto& xs = s.states();
  const std::size_t n = xs.size();
  const StateDistribution mu = s.empirical();

  // The policy only depends on (x, mu^N), so one table per step suffices.
  std::vector<std::optional<ActionDistribution>> table(env.n_states);
  std::vector<ActionId> us(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = table[xs[i]];
    if (!row) row.emplace(pi.action_dist(xs[i], mu));
    us[i] = sample(*row, rng);
  }
  ActionDistribution nu = empirical_action_dist(us, env.n_actions);

  const std::size_t cells = env.n_states * env.n_actions;
  std::vector<std::optional<StateDistribution>> kernels(cells);
  std::vector<std::optional<std::pair<double, double>>> payoffs(cells);
  std::vector<StateId> next(n);
  double reward = 0.0;
  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cell = xs[i] * env.n_actions + us[i];
    if (!payoffs[cell]) {
      payoffs[cell].emplace(env.reward(xs[i], us[i], mu, nu), env.cost(xs[i], us[i], mu, nu));
    }
    reward += payoffs[cell]->first;
    cost += payoffs[cell]->second;
    if (!kernels[cell]) kernels[cell].emplace(env.transition(xs[i], us[i], mu, nu));
    next[i] = sample(*kernels[cell], rng);
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return NAgentStep{JointState(std::move(next), env.n_states), reward * inv_n, cost * inv_n, std::move(nu)};
}

NAgentEstimate estimate_values(const JointState& x0, const Policy& pi, const EnvironmentSpec& env, double gamma,
                               std::size_t episodes, double tol, Rng& rng) {
  if (episodes == 0) throw std::invalid_argument("episodes must be >= 1");
  const std::size_t horizon = truncation_horizon(gamma, std::max(env.constants.m_r, env.constants.m_c), tol);

  std::vector<double> vr(episodes), vc(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    Rng stream = rng.split(e);
    JointState s = x0;
    double discount = 1.0;
    double sr = 0.0;
    double sc = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      auto out = step(s, pi, env, stream);
      sr += discount * out.avg_reward;
      sc += discount * out.avg_cost;
      discount *= gamma;
      s = std::move(out.next);
    }
    vr[e] = sr;
    vc[e] = sc;
  }

  auto mean_and_se = [episodes](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(episodes);
    if (episodes < 2) return std::pair{m, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double var = ss / static_cast<double>(episodes - 1);
    return std::pair{m, std::sqrt(var / static_cast<double>(episodes))};
  };
  const auto [mr, ser] = mean_and_se(vr);
  const auto [mc, sec] = mean_and_se(vc);
  return NAgentEstimate{mr, mc, ser, sec, episodes, horizon};
}

JointState sample_initial_joint_state(const StateDistribution& mu0, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("population size must be >= 1");
  std::vector<StateId> xs(n);
  for (auto& x : xs) x = sample(mu0, rng);
  return JointState(std::move(xs), mu0.size());
}

}  // namespace mfc
