#include <cmath>

#include <gtest/gtest.h>

#include "mixne/evaluation.hpp"
#include "mixne/rng.hpp"

using namespace mixne;

namespace {

TwoPlayerPolicy zero_policy() {
  Rng rng(0);
  auto p = make_two_player_policy(1, 1, {16, 16}, Activation::Relu, MixingConfig{0.1}, 0.3, rng);
  p.agent.values().setZero();
  return p;
}

TwoPlayerPolicy random_policy(std::uint64_t seed) {
  Rng rng(seed);
  return make_two_player_policy(1, 1, {16, 16}, Activation::Relu, MixingConfig{0.1}, 0.3, rng);
}

}  // namespace

TEST(Evaluation, StationaryPolicyFromOrigin) {
  ToyMdpConfig env;
  env.rho = 0.0;
  env.fixed_start = 0.0;
  double want = 0, w = 1;
  for (int t = 0; t < 500; ++t, w *= 0.99) want += 4.0 * w;
  const auto stats = evaluate_policy(zero_policy(), env, 3, 0);
  EXPECT_NEAR(stats.mean, want, 1e-9);
  EXPECT_NEAR(stats.mean, 397.371807, 1e-6);
  EXPECT_EQ(stats.std, 0.0);
  EXPECT_EQ(stats.episodes, 3u);
}

TEST(Evaluation, AdversaryIsIgnored) {
  ToyMdpConfig env;
  auto a = random_policy(1);
  auto b = a;
  b.adversary.values().setConstant(3.0);
  b.mixing.delta = 0.9;
  EXPECT_EQ(evaluate_policy(a, env, 5, 4), evaluate_policy(b, env, 5, 4));
}

TEST(Evaluation, ParallelMatchesSerialBitwise) {
  ToyMdpConfig env;
  env.rho = 0.3;
  const auto p = random_policy(2);
  for (std::size_t n : {1u, 7u, 64u}) EXPECT_EQ(evaluate_policy(p, env, n, 11), evaluate_policy_serial(p, env, n, 11));
}

TEST(Evaluation, EpisodesUseIndependentStreams) {
  ToyMdpConfig env;
  env.rho = 0.3;
  const auto p = random_policy(2);
  const auto stats = evaluate_policy(p, env, 4, 11);
  double returns[4];
  for (std::uint64_t i = 0; i < 4; ++i) returns[i] = agent_episode_return(p.agent, env, derive_seed(11, i));
  EXPECT_EQ(summarize_returns(returns, 4), stats);
}

TEST(Evaluation, ReturnsWithinRewardBounds) {
  for (double rho : {0.0, 0.2, 1.0}) {
    ToyMdpConfig env;
    env.rho = rho;
    const auto b = return_bounds(env);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const double r = agent_episode_return(random_policy(s).agent, env, s);
      EXPECT_GE(r, b.lo);
      EXPECT_LE(r, b.hi);
    }
    const auto rnd = evaluate_random_policy(env, 10, 3);
    EXPECT_GE(rnd.mean, b.lo);
    EXPECT_LE(rnd.mean, b.hi);
  }
}

TEST(Evaluation, SummaryStatistics) {
  const double x[] = {1.0, 2.0, 3.0, 6.0};
  const auto s = summarize_returns(x, 4);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(14.0 / 3.0));
  EXPECT_EQ(summarize_returns(x, 1).std, 0.0);
  EXPECT_THROW(summarize_returns(x, 0), std::invalid_argument);
  EXPECT_THROW(evaluate_policy(zero_policy(), ToyMdpConfig{}, 0, 0), std::invalid_argument);
}
