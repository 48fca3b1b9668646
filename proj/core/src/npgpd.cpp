#include "mfc/npgpd.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mfc/meanfield.hpp"
#include "mfc/sampler.hpp"

namespace mfc {

void SolverConfig::validate() const {
  // Zero rates are allowed: they give the degenerate no-op run.
  if (!(eta1 >= 0.0 && eta2 >= 0.0 && alpha >= 0.0)) throw std::invalid_argument("learning rates must be >= 0");
  if (outer_iters == 0 || inner_iters == 0) throw std::invalid_argument("J and L must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");
  if (!(lambda0 >= 0.0)) throw std::invalid_argument("initial multiplier must be >= 0");
  if (inner_batch == 0 || dual_batch == 0) throw std::invalid_argument("batch sizes must be >= 1");
  if (!(norm_bound > 0.0)) throw std::invalid_argument("norm bound must be positive");
}

std::vector<double> averaged_sgd(std::vector<double> w0, double alpha, std::size_t steps, std::size_t batch,
                                 const std::function<RegressionSample()>& draw) {
  std::vector<double> w = std::move(w0);
  std::vector<double> avg(w.size(), 0.0);
  std::vector<double> h(w.size());
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t l = 0; l < steps; ++l) {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t b = 0; b < batch; ++b) {
      const RegressionSample s = draw();
      double pred = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) pred += w[i] * s.g[i];
      const double resid = (pred - s.target) * inv_batch;
      for (std::size_t i = 0; i < w.size(); ++i) h[i] += resid * s.g[i];
    }
    bool finite = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= alpha * h[i];
      finite = finite && std::isfinite(w[i]);
      avg[i] += w[i];
    }
    if (!finite) throw SolverError("inner SGD diverged at step " + std::to_string(l), 0, l);
  }
  for (double& v : avg) v /= static_cast<double>(steps);
  return avg;
}

namespace {

std::vector<double> inner_sgd_on_path(const SoftmaxPolicy& pi, MeanFieldPath& path, double lambda,
                                      const SolverConfig& cfg, Rng& rng) {
  const auto& phi = pi.params();
  std::vector<double> w0 = cfg.w0.empty() ? std::vector<double>(phi.dim(), 0.0) : cfg.w0;
  if (w0.size() != phi.dim()) throw std::invalid_argument("w0 has wrong dimension");
  auto draw = [&]() {
    const OccupancySample s = sample_occupancy(path, cfg.gamma, rng);
    const AdvantageEstimate a = estimate_advantage(path, s, lambda, cfg.gamma, rng);
    return RegressionSample{log_prob_grad(phi, s.x, s.mu, s.u).grad, a.a_hat_lambda};
  };
  return averaged_sgd(std::move(w0), cfg.alpha, cfg.inner_iters, cfg.inner_batch, draw);
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

std::vector<double> inner_sgd(const PolicyParams& phi, double lambda, const SolverConfig& cfg,
                              const EnvironmentSpec& env, const StateDistribution& mu0, Rng& rng) {
  cfg.validate();
  const SoftmaxPolicy pi(phi);
  MeanFieldPath path(env, pi, mu0);
  return inner_sgd_on_path(pi, path, lambda, cfg, rng);
}

PolicyParams npg_step(const PolicyParams& phi, std::span<const double> w, const SolverConfig& cfg) {
  if (w.size() != phi.dim()) throw std::invalid_argument("direction has wrong dimension");
  PolicyParams next = phi;
  const double scale = cfg.eta1 / (1.0 - cfg.gamma);
  auto values = next.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += scale * w[i];
  return clip_to_norm_bound(std::move(next), cfg.norm_bound);
}

double dual_step(double lambda, double v_hat_c, const SolverConfig& cfg) {
  return std::max(0.0, lambda + cfg.eta2 * (v_hat_c - cfg.zeta));
}

SolverTrace solve(const SolverConfig& cfg, const EnvironmentSpec& env, const StateDistribution& mu0, Rng& rng,
                  const IterationCallback& on_iteration) {
  cfg.validate();
  const PolicyShape shape{env.n_states, env.n_actions};
  PolicyParams phi = cfg.phi0.value_or(PolicyParams(shape));
  if (!(phi.shape() == shape)) throw std::invalid_argument("initial parameters do not match the environment");
  double lambda = cfg.lambda0;

  const auto start = std::chrono::steady_clock::now();
  SolverTrace trace;
  trace.rows.reserve(cfg.outer_iters);
  for (std::size_t j = 0; j < cfg.outer_iters; ++j) {
    Rng iter = rng.split(j);
    Rng inner_rng = iter.split(0);
    Rng dual_rng = iter.split(1);

    const SoftmaxPolicy pi(phi);
    MeanFieldPath path(env, pi, mu0);
    std::vector<double> w;
    try {
      w = inner_sgd_on_path(pi, path, lambda, cfg, inner_rng);
    } catch (const SolverError& e) {
      throw SolverError(std::string(e.what()) + " in outer iteration " + std::to_string(j), j, e.inner_step());
    }

    double v_hat_c = 0.0;
    for (std::size_t b = 0; b < cfg.dual_batch; ++b) v_hat_c += estimate_constraint_value(path, cfg.gamma, dual_rng);
    v_hat_c /= static_cast<double>(cfg.dual_batch);

    phi = npg_step(phi, w, cfg);
    lambda = dual_step(lambda, v_hat_c, cfg);

    TraceRow row;
    row.j = j + 1;
    row.phi = phi;
    row.lambda = lambda;
    row.w_l1 = l1_norm(w);
    row.v_hat_c = v_hat_c;
    row.v_inf_r = row.v_inf_c = std::numeric_limits<double>::quiet_NaN();
    if (cfg.evaluate_iterates) {
      const auto values = mf_values(mu0, SoftmaxPolicy(phi), env, cfg.gamma, cfg.value_tol);
      row.v_inf_r = values.v_r;
      row.v_inf_c = values.v_c;
    }
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_iteration) on_iteration(row);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

}  // namespace mfc
