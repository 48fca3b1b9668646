#include "mfc/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfc {

void FirmsEnvConfig::validate() const {
  if (q < 2) throw std::invalid_argument("firms env needs q >= 2");
  if (alpha_r < 0 || beta_r < 0 || lambda_r < 0 || lambda_c < 0) {
    throw std::invalid_argument("firms env coefficients must be nonnegative");
  }
}

std::vector<double> floor_uniform_kernel(double headroom, std::size_t from, std::size_t n) {
  std::vector<double> p(n, 0.0);
  if (!(headroom > 0.0)) {
    p[from] = 1.0;
    return p;
  }
  const auto top = static_cast<std::size_t>(std::floor(headroom));
  for (std::size_t k = 0; k <= top && from + k < n; ++k) {
    const double kd = static_cast<double>(k);
    p[from + k] = std::min((kd + 1.0) / headroom, 1.0) - kd / headroom;
  }
  return p;
}

EnvironmentSpec firms_env(const FirmsEnvConfig& cfg) {
  cfg.validate();
  const double top = static_cast<double>(cfg.q - 1);

  EnvironmentSpec env;
  env.name = "firms";
  env.n_states = cfg.q;
  env.n_actions = 2;
  env.reward = [cfg](StateId x, ActionId u, const StateDistribution& mu, const ActionDistribution&) {
    return cfg.alpha_r * static_cast<double>(x) - cfg.beta_r * mean_state(mu) - cfg.lambda_r * static_cast<double>(u);
  };
  env.cost = [cfg](StateId, ActionId u, const StateDistribution&, const ActionDistribution&) {
    return cfg.lambda_c * static_cast<double>(u);
  };
  env.transition = [q = cfg.q, top](StateId x, ActionId u, const StateDistribution& mu, const ActionDistribution&) {
    if (u == 0) return StateDistribution::delta(q, x);
    const double slack = std::clamp(1.0 - mean_state(mu) / top, 0.0, 1.0);
    const double headroom = slack * (top - static_cast<double>(x));
    return StateDistribution(floor_uniform_kernel(headroom, x, q));
  };
  env.constants = EnvConstants{
      .m_r = std::max(cfg.alpha_r * top, cfg.beta_r * top + cfg.lambda_r),
      .m_c = cfg.lambda_c,
      .l_r = cfg.beta_r * top / 2.0,
      .l_c = 0.0,
      .l_p = top,
  };
  return env;
}

void CongestionEnvConfig::validate() const {
  if (sites < 2) throw std::invalid_argument("congestion env needs at least 2 sites");
  if (!(move_prob >= 0.0 && move_prob <= 1.0)) throw std::invalid_argument("move_prob must lie in [0, 1]");
  if (!(crowding >= 0.0 && crowding <= move_prob)) throw std::invalid_argument("crowding must lie in [0, move_prob]");
  if (crowd_penalty < 0 || move_cost < 0) throw std::invalid_argument("congestion env coefficients must be nonnegative");
}

EnvironmentSpec congestion_env(const CongestionEnvConfig& cfg) {
  cfg.validate();
  EnvironmentSpec env;
  env.name = "congestion";
  env.n_states = cfg.sites;
  env.n_actions = 2;
  env.reward = [cfg](StateId x, ActionId, const StateDistribution& mu, const ActionDistribution&) {
    return (x == 0 ? 1.0 : 0.0) - cfg.crowd_penalty * mu[x];
  };
  env.cost = [cfg](StateId, ActionId u, const StateDistribution&, const ActionDistribution&) {
    return cfg.move_cost * static_cast<double>(u);
  };
  env.transition = [cfg](StateId x, ActionId u, const StateDistribution& mu, const ActionDistribution&) {
    if (u == 0) return StateDistribution::delta(cfg.sites, x);
    const StateId y = (x + 1) % cfg.sites;
    const double p = cfg.move_prob - cfg.crowding * mu[y];
    std::vector<double> out(cfg.sites, 0.0);
    out[y] = p;
    out[x] = 1.0 - p;
    return StateDistribution(std::move(out));
  };
  env.constants = EnvConstants{
      .m_r = std::max(1.0, cfg.crowd_penalty),
      .m_c = cfg.move_cost,
      .l_r = cfg.crowd_penalty / 2.0,
      .l_c = 0.0,
      .l_p = cfg.crowding,
  };
  return env;
}

namespace {

// Moves a random amount of mass between two random coordinates.
std::vector<double> perturb(const std::vector<double>& p, Rng& rng) {
  std::vector<double> out = p;
  const std::size_t n = p.size();
  if (n < 2) return out;
  const std::size_t from = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
  std::size_t to = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - 1)) % (n - 1);
  if (to >= from) ++to;
  const double eps = out[from] * std::pow(10.0, -1.0 - 5.0 * rng.uniform());
  out[from] -= eps;
  out[to] += eps;
  return out;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

LipschitzReport validate_lipschitz(const EnvironmentSpec& env, std::size_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  LipschitzReport rep;
  rep.trials = trials;
  // Violations are judged on the numerator with an absolute allowance for
  // cancellation error, so tiny perturbations do not trip on rounding. The
  // reported ratios are raw and may exceed a tight constant by ~1e-8.
  auto exceeds = [](double num, double declared, double dist, double scale) {
    return num > declared * dist * (1.0 + 1e-9) + 1e-13 * (1.0 + scale);
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = static_cast<StateId>(rng.uniform() * static_cast<double>(env.n_states)) % env.n_states;
    const auto u = static_cast<ActionId>(rng.uniform() * static_cast<double>(env.n_actions)) % env.n_actions;
    auto m1 = random_simplex_point(env.n_states, rng);
    auto n1 = random_simplex_point(env.n_actions, rng);
    std::vector<double> m2;
    std::vector<double> n2;
    if (t % 2 == 0) {
      m2 = random_simplex_point(env.n_states, rng);
      n2 = random_simplex_point(env.n_actions, rng);
    } else {
      m2 = perturb(m1, rng);
      n2 = rng.bernoulli(0.5) ? n1 : perturb(n1, rng);
    }
    const StateDistribution mu1(m1), mu2(m2);
    const ActionDistribution nu1(n1), nu2(n2);
    const double dist = l1_distance(mu1, mu2) + l1_distance(nu1, nu2);
    if (dist <= 0.0) continue;

    const double r1 = env.reward(x, u, mu1, nu1);
    const double r2 = env.reward(x, u, mu2, nu2);
    const double c1 = env.cost(x, u, mu1, nu1);
    const double c2 = env.cost(x, u, mu2, nu2);
    const double dr = std::abs(r1 - r2);
    const double dc = std::abs(c1 - c2);
    const double dp = l1_distance(env.transition(x, u, mu1, nu1), env.transition(x, u, mu2, nu2));
    rep.max_ratio_r = std::max(rep.max_ratio_r, ratio(dr, dist));
    rep.max_ratio_c = std::max(rep.max_ratio_c, ratio(dc, dist));
    rep.max_ratio_p = std::max(rep.max_ratio_p, ratio(dp, dist));
    rep.violation_r = rep.violation_r || exceeds(dr, env.constants.l_r, dist, std::abs(r1) + std::abs(r2));
    rep.violation_c = rep.violation_c || exceeds(dc, env.constants.l_c, dist, std::abs(c1) + std::abs(c2));
    rep.violation_p =
        rep.violation_p || exceeds(dp, env.constants.l_p, dist, static_cast<double>(env.n_states));
  }
  return rep;
}

}  // namespace mfc
