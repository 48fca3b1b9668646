#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mfc/env.hpp"
#include "mfc/rng.hpp"

// Empirical checks of the Lipschitz and concentration properties that the
// approximation bounds rest on. Policies are random softmax-linear policies,
// each paired with its own L_Q.

namespace mfc {

struct InvariantCheck {
  std::string name;
  std::size_t n_agents = 0;  // 0 for mean-field checks
  // Lipschitz checks: largest ratio / bound over all samples, against bound 1.
  // Concentration checks: sample mean against the bound.
  double observed = 0.0;
  double bound = 0.0;
  double std_err = 0.0;
  std::size_t samples = 0;
  bool ok = false;
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;

  bool ok() const;
};

struct LipschitzSuiteConfig {
  std::size_t triples = 10'000;
  double param_scale = 1.0;  // policy parameters drawn from U[-scale, scale]
};

/// For random (mu1, mu2, pi) checks
///   |nu_mf(mu1) - nu_mf(mu2)|_1 <= (1 + L_Q) d,   |p_mf(mu1) - p_mf(mu2)|_1 <= S_P d,
///   |r_mf(mu1) - r_mf(mu2)|     <= S_R d,         |c_mf(mu1) - c_mf(mu2)|   <= S_C d
/// with d = |mu1 - mu2|_1. L_Q differs between policies, so each sample is
/// normalized by its own bound.
InvariantReport lipschitz_suite(const EnvironmentSpec& env, const LipschitzSuiteConfig& cfg, Rng& rng);

struct ConcentrationSuiteConfig {
  std::vector<std::size_t> n_agents{10, 100, 1000};
  std::size_t steps = 200;
  double param_scale = 1.0;
};

/// One-step concentration at finite N. Each sample draws a random policy, a
/// random mu, a joint state of N agents from it and one simulator step, then
/// compares with the mean-field quantities at the empirical mu^N:
///   E|nu^N - nu_mf(mu^N)|_1           <= sqrt|U| / sqrt N
///   E|mu^N_+ - p_mf(mu^N)|_1          <= (2 + L_P)(sqrt|X| + sqrt|U|) / sqrt N
///   E|avg reward - r_mf(mu^N)|        <= (M_R + L_R sqrt|U|) / sqrt N   (same for cost)
InvariantReport concentration_suite(const EnvironmentSpec& env, const ConcentrationSuiteConfig& cfg, Rng& rng);

}  // namespace mfc
