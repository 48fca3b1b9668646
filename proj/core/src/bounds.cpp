#include "mfc/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mfc {

void BoundInputs::validate() const {
  for (double v : {m_r, m_c, l_r, l_c, l_p, l_q}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("bound constants must be finite and >= 0");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must lie in [0, 1)");
  if (n_agents == 0 || n_states == 0 || n_actions == 0) throw std::invalid_argument("counts must be >= 1");
  if (!(zeta0 < 0.0)) throw std::invalid_argument("zeta0 must be negative");
}

BoundOutputs compute_bounds(const BoundInputs& in) {
  in.validate();
  BoundOutputs out;
  out.s_r = in.m_r + 2.0 * in.l_r + in.l_q * (in.m_r + in.l_r);
  out.s_c = in.m_c + 2.0 * in.l_c + in.l_q * (in.m_c + in.l_c);
  out.s_p = 1.0 + 2.0 * in.l_p + in.l_q * (1.0 + in.l_p);
  out.c_p = 2.0 + in.l_p;
  out.contraction_ok = in.gamma * out.s_p < 1.0;
  if (!out.contraction_ok) return out;

  const double g = in.gamma;
  const double k = g / ((1.0 - g * out.s_p) * (1.0 - g));
  const double sqrt_n = std::sqrt(static_cast<double>(in.n_agents));
  const double sqrt_x = std::sqrt(static_cast<double>(in.n_states));
  const double sqrt_u = std::sqrt(static_cast<double>(in.n_actions));

  auto g_full = [&](double m, double l, double s) {
    return (m + l * sqrt_u) / ((1.0 - g) * sqrt_n) + (sqrt_x + sqrt_u) / sqrt_n * s * out.c_p * k;
  };
  auto g_special = [&](double m, double s) { return m / ((1.0 - g) * sqrt_n) + sqrt_x / sqrt_n * 2.0 * s * k; };

  out.g_r = g_full(in.m_r, in.l_r, out.s_r);
  out.g_c = g_full(in.m_c, in.l_c, out.s_c);
  out.g_r0 = g_special(in.m_r, out.s_r);
  out.g_c0 = g_special(in.m_c, out.s_c);
  const double slater = 4.0 / std::abs(in.zeta0) * in.m_r / (1.0 - g);
  out.theorem1_gap = *out.g_r + *out.g_c * slater;
  out.theorem2_gap = *out.g_r0 + *out.g_c0 * slater;
  return out;
}

double tightened_zeta(const BoundInputs& in, TighteningMode mode, double zeta_raw) {
  const BoundOutputs out = compute_bounds(in);
  if (!out.contraction_ok) throw std::domain_error("contraction failed");
  const double factor = mode == TighteningMode::theorem1_mfc ? 1.0 : 2.0;
  return zeta_raw - factor * *out.g_c;
}

}  // namespace mfc
