#include "mfc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace mfc {

TabularPolicy::TabularPolicy(std::vector<ActionDistribution> per_state) : table_(std::move(per_state)) {
  if (table_.empty()) throw std::invalid_argument("tabular policy needs at least one state");
  for (const auto& d : table_) {
    if (d.size() != table_.front().size()) throw std::invalid_argument("inconsistent action counts");
  }
}

TabularPolicy TabularPolicy::constant(std::size_t n_states, const ActionDistribution& dist) {
  return TabularPolicy(std::vector<ActionDistribution>(n_states, dist));
}

TabularPolicy TabularPolicy::always(std::size_t n_states, std::size_t n_actions, ActionId u) {
  return constant(n_states, ActionDistribution::delta(n_actions, u));
}

PolicyParams::PolicyParams(PolicyShape shape) : shape_(shape), phi_(shape.dim(), 0.0) {}

PolicyParams::PolicyParams(PolicyShape shape, std::vector<double> phi) : shape_(shape), phi_(std::move(phi)) {
  if (phi_.size() != shape_.dim()) throw std::invalid_argument("parameter vector has wrong dimension");
  for (double v : phi_) {
    if (!std::isfinite(v)) throw std::invalid_argument("parameters must be finite");
  }
}

double PolicyParams::max_abs() const {
  double m = 0.0;
  for (double v : phi_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void logits(const PolicyParams& phi, StateId x, const StateDistribution& mu, std::vector<double>& out) {
  const auto& s = phi.shape();
  if (x >= s.n_states) throw std::invalid_argument("invalid state");
  if (mu.size() != s.n_states) throw std::invalid_argument("state distribution has wrong dimension");
  out.assign(s.n_actions, 0.0);
  for (ActionId u = 0; u < s.n_actions; ++u) {
    const double* w = phi.values().data() + phi.index(x, u, 0);
    double l = w[0];
    for (std::size_t y = 0; y < s.n_states; ++y) l += w[1 + y] * mu[y];
    out[u] = l;
  }
}

std::vector<double> softmax(const std::vector<double>& l) {
  const double top = *std::max_element(l.begin(), l.end());
  std::vector<double> p(l.size());
  double z = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    p[i] = std::exp(l[i] - top);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace

ActionDistribution action_dist(const PolicyParams& phi, StateId x, const StateDistribution& mu) {
  std::vector<double> l;
  logits(phi, x, mu, l);
  return ActionDistribution(softmax(l));
}

double log_prob(const PolicyParams& phi, StateId x, const StateDistribution& mu, ActionId u) {
  std::vector<double> l;
  logits(phi, x, mu, l);
  const double top = *std::max_element(l.begin(), l.end());
  double z = 0.0;
  for (double v : l) z += std::exp(v - top);
  return l.at(u) - top - std::log(z);
}

ScoreGradient log_prob_grad(const PolicyParams& phi, StateId x, const StateDistribution& mu, ActionId u) {
  const auto& s = phi.shape();
  if (u >= s.n_actions) throw std::invalid_argument("invalid action");
  std::vector<double> l;
  logits(phi, x, mu, l);
  const auto pi = softmax(l);

  ScoreGradient g{std::vector<double>(phi.dim(), 0.0)};
  for (ActionId a = 0; a < s.n_actions; ++a) {
    const double coeff = (a == u ? 1.0 : 0.0) - pi[a];
    const std::size_t base = phi.index(x, a, 0);
    g.grad[base] = coeff;
    for (std::size_t y = 0; y < s.n_states; ++y) g.grad[base + 1 + y] = coeff * mu[y];
  }
  return g;
}

double lipschitz_constant(const PolicyParams& phi) {
  const auto& s = phi.shape();
  double worst = 0.0;
  for (StateId x = 0; x < s.n_states; ++x) {
    for (ActionId u = 0; u < s.n_actions; ++u) {
      for (ActionId v = u + 1; v < s.n_actions; ++v) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t y = 0; y < s.n_states; ++y) {
          const double d = phi.at(x, u, 1 + y) - phi.at(x, v, 1 + y);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        worst = std::max(worst, hi - lo);
      }
    }
  }
  return worst / 4.0;
}

PolicyParams clip_to_norm_bound(PolicyParams phi, double bound) {
  for (double& v : phi.values()) v = std::clamp(v, -bound, bound);
  return phi;
}

void save_params(const std::filesystem::path& path, const PolicyParams& phi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out << "mfc-policy " << phi.shape().n_states << ' ' << phi.shape().n_actions << ' ' << phi.dim() << '\n';
  out << std::setprecision(17);
  for (double v : phi.values()) out << v << '\n';
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

PolicyParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
  std::string magic;
  PolicyShape shape;
  std::size_t dim = 0;
  if (!(in >> magic >> shape.n_states >> shape.n_actions >> dim) || magic != "mfc-policy" || dim != shape.dim()) {
    throw std::runtime_error("malformed checkpoint header in " + path.string());
  }
  std::vector<double> phi(dim);
  for (double& v : phi) {
    if (!(in >> v)) throw std::runtime_error("truncated checkpoint " + path.string());
  }
  return PolicyParams(shape, std::move(phi));
}

}  // namespace mfc
