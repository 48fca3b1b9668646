#include "mfc/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfc/bounds.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"
#include "mfc/policy.hpp"

namespace mfc {

bool InvariantReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.ok; });
}

namespace {

PolicyParams random_params(const EnvironmentSpec& env, double scale, Rng& rng) {
  PolicyParams phi(PolicyShape{env.n_states, env.n_actions});
  for (double& v : phi.values()) v = scale * (2.0 * rng.uniform() - 1.0);
  return phi;
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1);
}

std::vector<double> nearby(const std::vector<double>& p, Rng& rng) {
  std::vector<double> out = p;
  const std::size_t from = uniform_index(p.size(), rng);
  std::size_t to = uniform_index(p.size() - 1, rng);
  if (to >= from) ++to;
  const double eps = out[from] * std::pow(10.0, -1.0 - 5.0 * rng.uniform());
  out[from] -= eps;
  out[to] += eps;
  return out;
}

BoundOutputs s_constants(const EnvironmentSpec& env, double l_q) {
  BoundInputs in;
  in.m_r = env.constants.m_r;
  in.m_c = env.constants.m_c;
  in.l_r = env.constants.l_r;
  in.l_c = env.constants.l_c;
  in.l_p = env.constants.l_p;
  in.l_q = l_q;
  in.n_states = env.n_states;
  in.n_actions = env.n_actions;
  return compute_bounds(in);
}

struct RatioTracker {
  InvariantCheck check;

  void add(double num, double bound, double d) {
    ++check.samples;
    const double allowed = bound * d;
    if (allowed > 0.0) check.observed = std::max(check.observed, num / allowed);
    else if (num > 1e-13) check.observed = std::numeric_limits<double>::infinity();
    if (num > allowed * (1.0 + 1e-9) + 1e-13) check.ok = false;
  }
};

struct MeanTracker {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  InvariantCheck finish(std::string name, std::size_t agents, double bound) const {
    InvariantCheck c;
    c.name = std::move(name);
    c.n_agents = agents;
    c.samples = n;
    c.observed = sum / static_cast<double>(n);
    const double var = n > 1 ? std::max(0.0, (sum_sq - sum * c.observed) / static_cast<double>(n - 1)) : 0.0;
    c.std_err = std::sqrt(var / static_cast<double>(n));
    c.bound = bound;
    c.ok = c.observed <= bound;
    return c;
  }
};

}  // namespace

InvariantReport lipschitz_suite(const EnvironmentSpec& env, const LipschitzSuiteConfig& cfg, Rng& rng) {
  if (cfg.triples == 0) throw std::invalid_argument("triples must be >= 1");
  RatioTracker nu{{"lipschitz_nu_mf", 0, 0.0, 1.0, 0.0, 0, true}};
  RatioTracker p{{"lipschitz_p_mf", 0, 0.0, 1.0, 0.0, 0, true}};
  RatioTracker r{{"lipschitz_r_mf", 0, 0.0, 1.0, 0.0, 0, true}};
  RatioTracker c{{"lipschitz_c_mf", 0, 0.0, 1.0, 0.0, 0, true}};

  for (std::size_t t = 0; t < cfg.triples; ++t) {
    const SoftmaxPolicy pi(random_params(env, cfg.param_scale, rng));
    const double l_q = lipschitz_constant(pi.params());
    const BoundOutputs s = s_constants(env, l_q);

    const auto m1 = random_simplex_point(env.n_states, rng);
    const auto m2 = t % 2 == 0 ? random_simplex_point(env.n_states, rng) : nearby(m1, rng);
    const StateDistribution mu1(m1), mu2(m2);
    const double d = l1_distance(mu1, mu2);
    if (!(d > 0.0)) continue;

    nu.add(l1_distance(nu_mf(mu1, pi), nu_mf(mu2, pi)), 1.0 + l_q, d);
    p.add(l1_distance(p_mf(mu1, pi, env), p_mf(mu2, pi, env)), s.s_p, d);
    r.add(std::abs(r_mf(mu1, pi, env) - r_mf(mu2, pi, env)), s.s_r, d);
    c.add(std::abs(c_mf(mu1, pi, env) - c_mf(mu2, pi, env)), s.s_c, d);
  }
  return InvariantReport{{nu.check, p.check, r.check, c.check}};
}

InvariantReport concentration_suite(const EnvironmentSpec& env, const ConcentrationSuiteConfig& cfg, Rng& rng) {
  if (cfg.steps == 0) throw std::invalid_argument("steps must be >= 1");
  const double sqrt_x = std::sqrt(static_cast<double>(env.n_states));
  const double sqrt_u = std::sqrt(static_cast<double>(env.n_actions));
  const auto& k = env.constants;

  InvariantReport report;
  for (std::size_t n : cfg.n_agents) {
    if (n == 0) throw std::invalid_argument("population size must be >= 1");
    Rng stream = rng.split(n);
    MeanTracker nu, mu, r, c;
    for (std::size_t i = 0; i < cfg.steps; ++i) {
      const SoftmaxPolicy pi(random_params(env, cfg.param_scale, stream));
      const StateDistribution base(random_simplex_point(env.n_states, stream));
      const JointState s = sample_initial_joint_state(base, n, stream);
      const StateDistribution mu_n = s.empirical();
      const NAgentStep out = step(s, pi, env, stream);
      nu.add(l1_distance(out.nu, nu_mf(mu_n, pi)));
      mu.add(l1_distance(out.next.empirical(), p_mf(mu_n, pi, env)));
      r.add(std::abs(out.avg_reward - r_mf(mu_n, pi, env)));
      c.add(std::abs(out.avg_cost - c_mf(mu_n, pi, env)));
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    report.checks.push_back(nu.finish("concentration_nu", n, sqrt_u / sqrt_n));
    report.checks.push_back(mu.finish("concentration_mu", n, (2.0 + k.l_p) * (sqrt_x + sqrt_u) / sqrt_n));
    report.checks.push_back(r.finish("concentration_reward", n, (k.m_r + k.l_r * sqrt_u) / sqrt_n));
    report.checks.push_back(c.finish("concentration_cost", n, (k.m_c + k.l_c * sqrt_u) / sqrt_n));
  }
  return report;
}

}  // namespace mfc
