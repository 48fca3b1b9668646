#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfc/rng.hpp"

namespace mfc {

using StateId = std::size_t;
using ActionId = std::size_t;

// Sum deviation from 1 that is silently renormalized; anything larger is rejected.
inline constexpr double kSimplexTolerance = 1e-9;

namespace detail {
// Throws std::invalid_argument unless `probs` is a nonempty, finite,
// nonnegative vector summing to 1 within kSimplexTolerance; renormalizes in place.
void normalize_simplex(std::vector<double>& probs);
}  // namespace detail

/// Dense probability vector over a finite index set {0..n-1}.
///
/// The tag parameter keeps state and action distributions from being mixed up
/// at call sites; both share the same representation and invariants. Values
/// are immutable once constructed.
template <class Tag>
class Distribution {
 public:
  // Validates and renormalizes. Throws std::invalid_argument on negative or
  // non-finite entries, or when the sum is off by more than kSimplexTolerance.
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    detail::normalize_simplex(probs_);
  }

  static Distribution delta(std::size_t n, std::size_t at) {
    if (at >= n) throw std::invalid_argument("delta index out of range");
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return Distribution(std::move(p));
  }

  static Distribution uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("empty support");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> probs_;
};

struct StateTag {};
struct ActionTag {};
using StateDistribution = Distribution<StateTag>;
using ActionDistribution = Distribution<ActionTag>;

/// Fraction of agents in each state. Throws "empty population" for an empty
/// list and "invalid state" for an id >= n_states.
StateDistribution empirical_state_dist(std::span<const StateId> states, std::size_t n_states);

/// Fraction of agents taking each action; errors mirror empirical_state_dist.
ActionDistribution empirical_action_dist(std::span<const ActionId> actions, std::size_t n_actions);

/// Sum of absolute differences. Throws std::invalid_argument on size mismatch.
double l1_distance(std::span<const double> a, std::span<const double> b);

template <class Tag>
double l1_distance(const Distribution<Tag>& a, const Distribution<Tag>& b) {
  return l1_distance(a.probs(), b.probs());
}

/// Draws index i with probability probs[i] by inverse-CDF on one uniform draw.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

template <class Tag>
std::size_t sample(const Distribution<Tag>& dist, Rng& rng) {
  return sample_index(dist.probs(), rng);
}

/// Uniform point on the simplex (flat Dirichlet), used by property tests and
/// by the Lipschitz samplers.
std::vector<double> random_simplex_point(std::size_t n, Rng& rng);

/// Mean of the state index under `mu`, i.e. sum_x x * mu(x).
double mean_state(const StateDistribution& mu);

}  // namespace mfc
