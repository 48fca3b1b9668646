#include "mfc/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfc {

namespace {

std::vector<ActionDistribution> policy_table(const StateDistribution& mu, const Policy& pi) {
  std::vector<ActionDistribution> table;
  table.reserve(mu.size());
  for (StateId x = 0; x < mu.size(); ++x) table.push_back(pi.action_dist(x, mu));
  return table;
}

ActionDistribution mix(const StateDistribution& mu, const std::vector<ActionDistribution>& table) {
  std::vector<double> nu(table.front().size(), 0.0);
  for (StateId x = 0; x < mu.size(); ++x) {
    if (mu[x] == 0.0) continue;
    for (ActionId u = 0; u < nu.size(); ++u) nu[u] += table[x][u] * mu[x];
  }
  return ActionDistribution(std::move(nu));
}

void check_dims(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env) {
  if (mu.size() != env.n_states || pi.n_states() != env.n_states || pi.n_actions() != env.n_actions) {
    throw std::invalid_argument("policy, environment and distribution dimensions disagree");
  }
}

// Everything one application of the mean-field map produces.
struct Transfer {
  ActionDistribution nu;
  StateDistribution next;
  double reward;
  double cost;
};

Transfer transfer(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env) {
  check_dims(mu, pi, env);
  const auto table = policy_table(mu, pi);
  ActionDistribution nu = mix(mu, table);
  std::vector<double> next(env.n_states, 0.0);
  double reward = 0.0;
  double cost = 0.0;
  for (StateId x = 0; x < env.n_states; ++x) {
    if (mu[x] == 0.0) continue;
    for (ActionId u = 0; u < env.n_actions; ++u) {
      const double w = table[x][u] * mu[x];
      if (w == 0.0) continue;
      reward += w * env.reward(x, u, mu, nu);
      cost += w * env.cost(x, u, mu, nu);
      const auto kernel = env.transition(x, u, mu, nu);
      for (StateId y = 0; y < env.n_states; ++y) next[y] += w * kernel[y];
    }
  }
  return Transfer{std::move(nu), StateDistribution(std::move(next)), reward, cost};
}

}  // namespace

ActionDistribution nu_mf(const StateDistribution& mu, const Policy& pi) {
  if (mu.size() != pi.n_states()) throw std::invalid_argument("policy and distribution dimensions disagree");
  return mix(mu, policy_table(mu, pi));
}

StateDistribution p_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env) {
  return transfer(mu, pi, env).next;
}

double r_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env) {
  return transfer(mu, pi, env).reward;
}

double c_mf(const StateDistribution& mu, const Policy& pi, const EnvironmentSpec& env) {
  return transfer(mu, pi, env).cost;
}

std::size_t truncation_horizon(double gamma, double bound, double tol) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (gamma == 0.0 || bound <= 0.0) return 1;
  // gamma^T * bound / (1 - gamma) < tol  <=>  T > log(tol (1 - gamma) / bound) / log(gamma)
  const double t = std::log(tol * (1.0 - gamma) / bound) / std::log(gamma);
  if (!std::isfinite(t) || t >= static_cast<double>(kMaxHorizon)) throw std::invalid_argument("horizon too long");
  auto horizon = static_cast<std::size_t>(std::max(1.0, std::floor(t) + 1.0));
  while (horizon > 1 && std::pow(gamma, static_cast<double>(horizon - 1)) * bound / (1.0 - gamma) < tol) --horizon;
  return horizon;
}

MFValues mf_values(const StateDistribution& mu0, const PolicySchedule& policy_at, const EnvironmentSpec& env,
                   double gamma, double tol) {
  const double bound = std::max(env.constants.m_r, env.constants.m_c);
  const std::size_t horizon = truncation_horizon(gamma, bound, tol);
  MFValues out;
  out.trajectory.gamma = gamma;
  out.trajectory.steps.reserve(horizon);
  StateDistribution mu = mu0;
  double discount = 1.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    auto tr = transfer(mu, policy_at(t), env);
    out.v_r += discount * tr.reward;
    out.v_c += discount * tr.cost;
    discount *= gamma;
    out.trajectory.steps.push_back(MFStep{mu, std::move(tr.nu), tr.reward, tr.cost});
    mu = std::move(tr.next);
  }
  return out;
}

MFValues mf_values(const StateDistribution& mu0, const Policy& pi, const EnvironmentSpec& env, double gamma,
                   double tol) {
  return mf_values(mu0, [&pi](std::size_t) -> const Policy& { return pi; }, env, gamma, tol);
}

MeanFieldPath::MeanFieldPath(const EnvironmentSpec& env, const Policy& pi, StateDistribution mu0) : env_(env), pi_(pi) {
  check_dims(mu0, pi, env);
  steps_.push_back(make_step(std::move(mu0)));
}

MeanFieldPath::Step MeanFieldPath::make_step(StateDistribution mu) const {
  auto table = policy_table(mu, pi_);
  auto nu = mix(mu, table);
  const std::size_t cells = env_.n_states * env_.n_actions;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return Step{std::move(mu), std::move(nu), std::move(table), std::vector<std::optional<StateDistribution>>(cells),
              std::vector<double>(cells, nan), std::vector<double>(cells, nan)};
}

MeanFieldPath::Step& MeanFieldPath::at(std::size_t t) {
  while (steps_.size() <= t) {
    Step& last = steps_.back();
    std::vector<double> next(env_.n_states, 0.0);
    for (StateId x = 0; x < env_.n_states; ++x) {
      if (last.mu[x] == 0.0) continue;
      for (ActionId u = 0; u < env_.n_actions; ++u) {
        const double w = last.policy[x][u] * last.mu[x];
        if (w == 0.0) continue;
        const auto& kernel = transition(steps_.size() - 1, x, u);
        for (StateId y = 0; y < env_.n_states; ++y) next[y] += w * kernel[y];
      }
    }
    steps_.push_back(make_step(StateDistribution(std::move(next))));
  }
  return steps_[t];
}

const StateDistribution& MeanFieldPath::transition(std::size_t t, StateId x, ActionId u) {
  Step& s = at(t);
  auto& slot = s.kernels[x * env_.n_actions + u];
  if (!slot) slot.emplace(env_.transition(x, u, s.mu, s.nu));
  return *slot;
}

double MeanFieldPath::reward(std::size_t t, StateId x, ActionId u) {
  Step& s = at(t);
  double& v = s.rewards[x * env_.n_actions + u];
  if (std::isnan(v)) v = env_.reward(x, u, s.mu, s.nu);
  return v;
}

double MeanFieldPath::cost(std::size_t t, StateId x, ActionId u) {
  Step& s = at(t);
  double& v = s.costs[x * env_.n_actions + u];
  if (std::isnan(v)) v = env_.cost(x, u, s.mu, s.nu);
  return v;
}

}  // namespace mfc
