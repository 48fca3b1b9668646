#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "mfc/simplex.hpp"

namespace mfc {

/// A stationary mean-field policy: the action law of an agent in state x
/// when the population is distributed as mu.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::size_t n_states() const = 0;
  virtual std::size_t n_actions() const = 0;
  virtual ActionDistribution action_dist(StateId x, const StateDistribution& mu) const = 0;
};

/// Policy that ignores mu: one fixed action distribution per state.
class TabularPolicy final : public Policy {
 public:
  explicit TabularPolicy(std::vector<ActionDistribution> per_state);

  // Same action distribution in every state.
  static TabularPolicy constant(std::size_t n_states, const ActionDistribution& dist);
  // Deterministic action `u` in every state.
  static TabularPolicy always(std::size_t n_states, std::size_t n_actions, ActionId u);

  std::size_t n_states() const override { return table_.size(); }
  std::size_t n_actions() const override { return table_.front().size(); }
  ActionDistribution action_dist(StateId x, const StateDistribution&) const override { return table_.at(x); }

 private:
  std::vector<ActionDistribution> table_;
};

struct PolicyShape {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;

  std::size_t feature_dim() const { return 1 + n_states; }
  std::size_t dim() const { return n_states * n_actions * feature_dim(); }
  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

inline constexpr double kDefaultNormBound = 50.0;

/// Parameters of the softmax-linear policy class
///   pi(x, mu)(u) ∝ exp(phi[x, u, :] · [1, mu(0), ..., mu(|X|-1)]).
/// Flat storage is x-major, then u, then feature index.
class PolicyParams {
 public:
  PolicyParams() = default;
  explicit PolicyParams(PolicyShape shape);  // zeros: the uniform policy
  PolicyParams(PolicyShape shape, std::vector<double> phi);

  const PolicyShape& shape() const noexcept { return shape_; }
  std::size_t dim() const noexcept { return phi_.size(); }
  std::span<const double> values() const noexcept { return phi_; }
  std::span<double> values() noexcept { return phi_; }

  std::size_t index(StateId x, ActionId u, std::size_t k) const {
    return (x * shape_.n_actions + u) * shape_.feature_dim() + k;
  }
  double at(StateId x, ActionId u, std::size_t k) const { return phi_[index(x, u, k)]; }
  double& at(StateId x, ActionId u, std::size_t k) { return phi_[index(x, u, k)]; }

  double max_abs() const;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;

 private:
  PolicyShape shape_;
  std::vector<double> phi_;
};

/// Gradient of log pi(x, mu)(u) with respect to phi, dense over all of phi.
struct ScoreGradient {
  std::vector<double> grad;
};

ActionDistribution action_dist(const PolicyParams& phi, StateId x, const StateDistribution& mu);

/// Softmax score: feature(x,u,mu) - sum_u' pi(u') feature(x,u',mu).
/// Its L1 norm is at most 4 because each feature block has L1 norm <= 2.
ScoreGradient log_prob_grad(const PolicyParams& phi, StateId x, const StateDistribution& mu, ActionId u);

double log_prob(const PolicyParams& phi, StateId x, const StateDistribution& mu, ActionId u);

/// Upper bound on sup |pi(x,mu1) - pi(x,mu2)|_1 / |mu1 - mu2|_1.
///
/// With D = phi[x,u,1:] - phi[x,u',1:], the logit gap moves by at most
/// (max D - min D)/2 per unit of |dmu|_1 because dmu sums to zero, and the
/// softmax Jacobian maps a logit perturbation with range R to at most R/2 in
/// L1 (mean absolute deviation of a variable confined to an interval of
/// width R). Hence
///   L_Q = 1/4 * max_x max_{u,u'} (max_y D(y) - min_y D(y)).
double lipschitz_constant(const PolicyParams& phi);

/// Clamps every coordinate into [-bound, bound].
PolicyParams clip_to_norm_bound(PolicyParams phi, double bound);

/// SoftmaxPolicy adapts PolicyParams to the Policy interface.
class SoftmaxPolicy final : public Policy {
 public:
  explicit SoftmaxPolicy(PolicyParams params) : params_(std::move(params)) {}

  std::size_t n_states() const override { return params_.shape().n_states; }
  std::size_t n_actions() const override { return params_.shape().n_actions; }
  ActionDistribution action_dist(StateId x, const StateDistribution& mu) const override {
    return mfc::action_dist(params_, x, mu);
  }
  const PolicyParams& params() const noexcept { return params_; }

 private:
  PolicyParams params_;
};

/// Checkpoint format: first line "mfc-policy <n_states> <n_actions> <dim>",
/// then one value per line in flat order, printed with 17 significant digits
/// so that reloading is exact.
void save_params(const std::filesystem::path& path, const PolicyParams& phi);
PolicyParams load_params(const std::filesystem::path& path);

}  // namespace mfc
