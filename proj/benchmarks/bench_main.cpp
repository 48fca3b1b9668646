#include <benchmark/benchmark.h>

#include "mfc/env.hpp"
#include "mfc/meanfield.hpp"
#include "mfc/nagent.hpp"
#include "mfc/npgpd.hpp"
#include "mfc/sampler.hpp"

namespace {

using namespace mfc;

PolicyParams bench_params(std::size_t q, std::uint64_t seed) {
  Rng rng(seed);
  PolicyParams phi({q, 2});
  for (double& v : phi.values()) v = 2.0 * rng.uniform() - 1.0;
  return phi;
}

void BM_PMf(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  FirmsEnvConfig cfg;
  cfg.q = q;
  const auto env = firms_env(cfg);
  const SoftmaxPolicy pi(bench_params(q, 1));
  auto mu = StateDistribution::uniform(q);
  for (auto _ : state) {
    mu = p_mf(mu, pi, env);
    benchmark::DoNotOptimize(mu);
  }
}
BENCHMARK(BM_PMf)->Arg(10)->Arg(50);

void BM_MfValues(benchmark::State& state) {
  const auto env = firms_env(FirmsEnvConfig{});
  const SoftmaxPolicy pi(bench_params(10, 2));
  const auto mu0 = StateDistribution::uniform(10);
  for (auto _ : state) benchmark::DoNotOptimize(mf_values(mu0, pi, env, 0.9));
}
BENCHMARK(BM_MfValues);

void BM_NAgentStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto env = firms_env(FirmsEnvConfig{});
  const SoftmaxPolicy pi(bench_params(10, 3));
  Rng rng(4);
  JointState s = sample_initial_joint_state(StateDistribution::uniform(10), n, rng);
  for (auto _ : state) {
    auto out = step(s, pi, env, rng);
    s = std::move(out.next);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_NAgentStep)->Arg(100)->Arg(1000)->Arg(10000);

void BM_AdvantageRollout(benchmark::State& state) {
  const auto env = firms_env(FirmsEnvConfig{});
  const SoftmaxPolicy pi(bench_params(10, 5));
  MeanFieldPath path(env, pi, StateDistribution::uniform(10));
  Rng rng(6);
  for (auto _ : state) {
    const auto s = sample_occupancy(path, 0.9, rng);
    benchmark::DoNotOptimize(estimate_advantage(path, s, 0.5, 0.9, rng));
  }
}
BENCHMARK(BM_AdvantageRollout);

void BM_SolverIteration(benchmark::State& state) {
  const auto env = firms_env(FirmsEnvConfig{});
  SolverConfig cfg;
  cfg.outer_iters = 1;
  cfg.evaluate_iterates = false;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(solve(cfg, env, StateDistribution::uniform(10), rng));
  }
}
BENCHMARK(BM_SolverIteration)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
