#pragma once

#include <cstddef>
#include <optional>

// Finite-population approximation widths for constrained mean-field control.
//
// With S_J = M_J + 2 L_J + L_Q (M_J + L_J), S_P = 1 + 2 L_P + L_Q (1 + L_P),
// C_P = 2 + L_P and
//   K = [1/(1 - g S_P) - 1/(1 - g)] / (S_P - 1) = g / ((1 - g S_P)(1 - g)),
// the widths are
//   G_J  = (M_J + L_J sqrt|U|) / ((1 - g) sqrt N) + (sqrt|X| + sqrt|U|) / sqrt N * S_J C_P K
//   G_J0 = M_J / ((1 - g) sqrt N) + sqrt|X| / sqrt N * 2 S_J K
// where G_J0 applies when the reward, cost and transition ignore the action
// distribution. The two forms of K agree, so the second one is used: it has no
// removable singularity at S_P = 1, where it equals g / (1 - g)^2.
//
// The Slater margin zeta0 is negative; the gap terms use |zeta0| so that they
// are nonnegative widths.

namespace mfc {

struct BoundInputs {
  double m_r = 0.0;
  double m_c = 0.0;
  double l_r = 0.0;
  double l_c = 0.0;
  double l_p = 0.0;
  double l_q = 0.0;
  double gamma = 0.0;
  std::size_t n_agents = 1;
  std::size_t n_states = 1;
  std::size_t n_actions = 1;
  double zeta0 = -1.0;
  // Slater margin of the mean-field problem; informational only.
  std::optional<double> zeta1;

  void validate() const;
};

struct BoundOutputs {
  double s_r = 0.0;
  double s_c = 0.0;
  double s_p = 0.0;
  double c_p = 0.0;
  bool contraction_ok = false;
  // Present only when contraction_ok.
  std::optional<double> g_r;
  std::optional<double> g_c;
  std::optional<double> g_r0;
  std::optional<double> g_c0;
  std::optional<double> theorem1_gap;
  std::optional<double> theorem2_gap;
};

BoundOutputs compute_bounds(const BoundInputs& in);

enum class TighteningMode { theorem1_mfc, theorem3_solver };

/// zeta_raw - G_C (theorem1_mfc) or zeta_raw - 2 G_C (theorem3_solver).
/// Throws std::domain_error("contraction failed") when g S_P >= 1.
double tightened_zeta(const BoundInputs& in, TighteningMode mode, double zeta_raw = 0.0);

}  // namespace mfc
