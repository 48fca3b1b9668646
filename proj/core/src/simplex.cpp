#include "mfc/simplex.hpp"

#include <cmath>
#include <numeric>

namespace mfc {

namespace detail {

void normalize_simplex(std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("empty support");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probability entries must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("probabilities do not sum to 1");
  }
  if (total != 1.0) {
    for (double& p : probs) p /= total;
  }
}

}  // namespace detail

namespace {

std::vector<double> count_fractions(std::span<const std::size_t> ids, std::size_t n, const char* invalid_msg) {
  if (ids.empty()) throw std::invalid_argument("empty population");
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t id : ids) {
    if (id >= n) throw std::invalid_argument(invalid_msg);
    ++counts[id];
  }
  const double total = static_cast<double>(ids.size());
  std::vector<double> probs(n);
  for (std::size_t i = 0; i < n; ++i) probs[i] = static_cast<double>(counts[i]) / total;
  return probs;
}

}  // namespace

StateDistribution empirical_state_dist(std::span<const StateId> states, std::size_t n_states) {
  return StateDistribution(count_fractions(states, n_states, "invalid state"));
}

ActionDistribution empirical_action_dist(std::span<const ActionId> actions, std::size_t n_actions) {
  return ActionDistribution(count_fractions(actions, n_actions, "invalid action"));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cdf += probs[i];
    last_positive = i;
    if (u < cdf) return i;
  }
  // Rounding left the CDF a hair below 1.
  return last_positive;
}

std::vector<double> random_simplex_point(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log1p(-rng.uniform());
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

double mean_state(const StateDistribution& mu) {
  double m = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) m += static_cast<double>(x) * mu[x];
  return m;
}

}  // namespace mfc
