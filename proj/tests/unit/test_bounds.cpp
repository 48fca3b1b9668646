#include <gtest/gtest.h>

#include <cmath>

#include "mfc/bounds.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"
#include "test_envs.hpp"

namespace mfc {
namespace {

BoundInputs golden_inputs() {
  BoundInputs in;
  in.m_r = in.m_c = 1.0;
  in.l_r = in.l_c = in.l_p = in.l_q = 0.1;
  in.gamma = 0.5;
  in.n_agents = 100;
  in.n_states = 10;
  in.n_actions = 2;
  in.zeta0 = -1.0;
  return in;
}

// Reference evaluation of the widths with the (S_P - 1) difference quotient,
// valid only away from S_P = 1.
double g_full_quotient(const BoundInputs& in) {
  const double g = in.gamma;
  const double s_r = in.m_r + 2 * in.l_r + in.l_q * (in.m_r + in.l_r);
  const double s_p = 1 + 2 * in.l_p + in.l_q * (1 + in.l_p);
  const double k = (1 / (1 - g * s_p) - 1 / (1 - g)) / (s_p - 1);
  const double n = static_cast<double>(in.n_agents);
  return (in.m_r + in.l_r * std::sqrt(static_cast<double>(in.n_actions))) / ((1 - g) * std::sqrt(n)) +
         (std::sqrt(static_cast<double>(in.n_states)) + std::sqrt(static_cast<double>(in.n_actions))) / std::sqrt(n) *
             s_r * (2 + in.l_p) * k;
}

void expect_rel(double actual, double expected, double rel) {
  EXPECT_LE(std::abs(actual - expected), rel * std::abs(expected)) << actual << " vs " << expected;
}

TEST(ComputeBounds, GoldenValues) {
  // Evaluated offline at 50 significant digits.
  const auto out = compute_bounds(golden_inputs());
  ASSERT_TRUE(out.contraction_ok);
  expect_rel(out.s_r, 1.31, 1e-12);
  expect_rel(out.s_c, 1.31, 1e-12);
  expect_rel(out.s_p, 1.31, 1e-12);
  expect_rel(out.c_p, 2.1, 1e-12);
  expect_rel(*out.g_r, 3.877538576526185385492672, 1e-12);
  expect_rel(*out.g_c, 3.877538576526185385492672, 1e-12);
  expect_rel(*out.g_r0, 2.601497817287290970967276, 1e-12);
  expect_rel(*out.g_c0, 2.601497817287290970967276, 1e-12);
  expect_rel(*out.theorem1_gap, 34.89784718873566846943405, 1e-12);
  expect_rel(*out.theorem2_gap, 23.41348035558561873870548, 1e-12);
}

TEST(ComputeBounds, QuotientFormAgreesAwayFromOne) {
  const auto in = golden_inputs();
  expect_rel(*compute_bounds(in).g_r, g_full_quotient(in), 1e-12);
}

TEST(ComputeBounds, QuadruplingNHalvesWidths) {
  auto in = golden_inputs();
  const auto a = compute_bounds(in);
  in.n_agents *= 4;
  const auto b = compute_bounds(in);
  expect_rel(*a.g_r / *b.g_r, 2.0, 1e-12);
  expect_rel(*a.g_c / *b.g_c, 2.0, 1e-12);
  expect_rel(*a.g_r0 / *b.g_r0, 2.0, 1e-12);
  expect_rel(*a.g_c0 / *b.g_c0, 2.0, 1e-12);
}

TEST(ComputeBounds, ZeroLipschitzLimit) {
  BoundInputs in;
  in.m_r = 1.0;
  in.gamma = 0.9;
  in.n_agents = 100;
  in.n_states = 10;
  in.n_actions = 2;
  const auto out = compute_bounds(in);
  EXPECT_EQ(out.s_r, 1.0);
  EXPECT_EQ(out.s_p, 1.0);
  EXPECT_EQ(out.c_p, 2.0);
  const double g = 0.9;
  const double expected = 1.0 / ((1 - g) * 10.0) + (std::sqrt(10.0) + std::sqrt(2.0)) / 10.0 * 2.0 * g / ((1 - g) * (1 - g));
  expect_rel(*out.g_r, expected, 1e-12);

  // A tiny L_P moves S_P just above 1; the quotient form is then well defined.
  in.l_p = 5e-7;  // S_P = 1 + 1e-6
  expect_rel(*compute_bounds(in).g_r, g_full_quotient(in), 1e-6);
  expect_rel(g_full_quotient(in), expected, 1e-4);
}

TEST(ComputeBounds, ContinuityBracketAtOne) {
  // The closed-form K as a function of S_P, evaluated at 1 - 1e-6, 1 and 1 + 1e-6.
  const double g = 0.9;
  auto k_quotient = [g](double s) { return (1 / (1 - g * s) - 1 / (1 - g)) / (s - 1); };
  const double limit = g / ((1 - g) * (1 - g));
  for (double s : {1 - 1e-6, 1 + 1e-6}) expect_rel(k_quotient(s), limit, 1e-4);
  EXPECT_LT(k_quotient(1 - 1e-6), limit);
  EXPECT_GT(k_quotient(1 + 1e-6), limit);
}

TEST(ComputeBounds, ContractionFailure) {
  auto in = golden_inputs();
  in.gamma = 0.9;
  in.l_p = 1.0;
  const auto out = compute_bounds(in);
  EXPECT_FALSE(out.contraction_ok);
  EXPECT_GT(out.s_p, 1.0 / in.gamma);
  EXPECT_FALSE(out.g_r.has_value());
  EXPECT_FALSE(out.g_c0.has_value());
  EXPECT_FALSE(out.theorem1_gap.has_value());
  try {
    tightened_zeta(in, TighteningMode::theorem1_mfc);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "contraction failed");
  }
}

TEST(ComputeBounds, FirmsConstantsDoNotContract) {
  const auto env = firms_env(FirmsEnvConfig{});
  BoundInputs in;
  in.m_r = env.constants.m_r;
  in.m_c = env.constants.m_c;
  in.l_r = env.constants.l_r;
  in.l_c = env.constants.l_c;
  in.l_p = env.constants.l_p;
  in.gamma = 0.9;
  in.n_agents = 100;
  in.n_states = 10;
  in.n_actions = 2;
  EXPECT_FALSE(compute_bounds(in).contraction_ok);
}

TEST(ComputeBounds, Validation) {
  auto in = golden_inputs();
  in.zeta0 = 0.0;
  EXPECT_THROW(compute_bounds(in), std::invalid_argument);
  in = golden_inputs();
  in.gamma = 1.0;
  EXPECT_THROW(compute_bounds(in), std::invalid_argument);
  in = golden_inputs();
  in.l_q = -0.1;
  EXPECT_THROW(compute_bounds(in), std::invalid_argument);
  in = golden_inputs();
  in.n_agents = 0;
  EXPECT_THROW(compute_bounds(in), std::invalid_argument);
}

TEST(ComputeBounds, Monotonicity) {
  const auto base = golden_inputs();
  const auto b0 = compute_bounds(base);
  auto probe = [&](auto mutate, bool reward_side) {
    auto in = base;
    mutate(in);
    const auto b = compute_bounds(in);
    ASSERT_TRUE(b.contraction_ok);
    if (reward_side) {
      EXPECT_GT(*b.g_r, *b0.g_r);
    } else {
      EXPECT_GT(*b.g_c, *b0.g_c);
    }
  };
  probe([](BoundInputs& in) { in.m_r += 0.01; }, true);
  probe([](BoundInputs& in) { in.l_r += 0.01; }, true);
  probe([](BoundInputs& in) { in.m_c += 0.01; }, false);
  probe([](BoundInputs& in) { in.l_c += 0.01; }, false);
  probe([](BoundInputs& in) { in.n_states += 1; }, true);
  probe([](BoundInputs& in) { in.n_actions += 1; }, true);
  probe([](BoundInputs& in) { in.n_actions += 1; }, false);

  double prev = *b0.g_r;
  for (std::size_t n : {101u, 200u, 1000u, 100000u}) {
    auto in = base;
    in.n_agents = n;
    const double g = *compute_bounds(in).g_r;
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(ComputeBounds, NonnegativeAndSpecialCaseDominated) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    BoundInputs in;
    in.m_r = 2 * rng.uniform();
    in.m_c = 2 * rng.uniform();
    in.l_r = rng.uniform();
    in.l_c = rng.uniform();
    in.l_p = 0.3 * rng.uniform();
    in.l_q = 0.3 * rng.uniform();
    in.gamma = 0.5 * rng.uniform();
    in.n_agents = 1 + static_cast<std::size_t>(1000 * rng.uniform());
    in.n_states = 2 + static_cast<std::size_t>(10 * rng.uniform());
    in.n_actions = 2 + static_cast<std::size_t>(3 * rng.uniform());
    in.zeta0 = -0.1 - rng.uniform();
    const auto out = compute_bounds(in);
    if (!out.contraction_ok) continue;
    for (double v : {out.s_r, out.s_c, out.s_p, out.c_p, *out.g_r, *out.g_c, *out.g_r0, *out.g_c0,
                     *out.theorem1_gap, *out.theorem2_gap}) {
      EXPECT_GE(v, 0.0);
    }
    EXPECT_LE(*out.g_r0, *out.g_r);
    EXPECT_LE(*out.g_c0, *out.g_c);
  }
}

TEST(TightenedZeta, Modes) {
  const auto in = golden_inputs();
  const double gc = *compute_bounds(in).g_c;
  EXPECT_DOUBLE_EQ(tightened_zeta(in, TighteningMode::theorem1_mfc), -gc);
  EXPECT_DOUBLE_EQ(tightened_zeta(in, TighteningMode::theorem3_solver), -2 * gc);
  EXPECT_DOUBLE_EQ(tightened_zeta(in, TighteningMode::theorem1_mfc, 5.0), 5.0 - gc);
  EXPECT_DOUBLE_EQ(tightened_zeta(in, TighteningMode::theorem3_solver, 5.0), 5.0 - 2 * gc);
  auto big = in;
  big.n_agents = 1'000'000'000'000ULL;
  EXPECT_LT(std::abs(tightened_zeta(big, TighteningMode::theorem3_solver)), 1e-4);
}

TEST(EmpiricalSoundness, CongestionGapsWithinSpecialCaseWidths) {
  // The congestion env ignores the action distribution, so the special-case
  // widths apply. gamma = 0.5 keeps gamma * S_P < 1.
  const auto env = congestion_env(CongestionEnvConfig{});
  const double gamma = 0.5;
  Rng prng(2);
  const PolicyParams phi = testing::random_params({3, 2}, 0.1, prng);
  const SoftmaxPolicy pi(phi);
  const auto mu0 = StateDistribution::uniform(3);
  const auto mf = mf_values(mu0, pi, env, gamma);

  BoundInputs in;
  in.m_r = env.constants.m_r;
  in.m_c = env.constants.m_c;
  in.l_r = env.constants.l_r;
  in.l_c = env.constants.l_c;
  in.l_p = env.constants.l_p;
  in.l_q = lipschitz_constant(phi);
  in.gamma = gamma;
  in.n_states = 3;
  in.n_actions = 2;
  for (std::size_t n : {100u, 1000u}) {
    in.n_agents = n;
    const auto out = compute_bounds(in);
    ASSERT_TRUE(out.contraction_ok);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      Rng rng(derive_seed(3, {seed, n}));
      Rng init = rng.split(0), ep = rng.split(1);
      const auto x0 = sample_initial_joint_state(mu0, n, init);
      const auto est = estimate_values(x0, pi, env, gamma, 32, 1e-6, ep);
      EXPECT_LE(std::abs(est.v_r - mf.v_r), *out.g_r0) << n << " " << seed;
      EXPECT_LE(std::abs(est.v_c - mf.v_c), *out.g_c0) << n << " " << seed;
    }
  }
}

}  // namespace
}  // namespace mfc
