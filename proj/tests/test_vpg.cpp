#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mixne/evaluation.hpp"
#include "mixne/rng.hpp"
#include "mixne/vpg.hpp"

using namespace mixne;

namespace {

// One-step bandit with a quadratic reward on the mixed action and loose
// action bounds so that no clamping happens.
class QuadraticBandit final : public Environment {
 public:
  explicit QuadraticBandit(double centre) : centre_(centre) {}
  [[nodiscard]] int observation_dim() const override { return 1; }
  [[nodiscard]] int action_dim() const override { return 1; }
  [[nodiscard]] double action_lo() const override { return -100.0; }
  [[nodiscard]] double action_hi() const override { return 100.0; }
  [[nodiscard]] double discount() const override { return 0.99; }
  Eigen::VectorXd reset(Rng&) override { return Eigen::VectorXd::Constant(1, 0.3); }
  Transition step(const Eigen::VectorXd& a, Rng&) override {
    return {Eigen::VectorXd::Constant(1, 0.3), -(a[0] - centre_) * (a[0] - centre_), true};
  }

 private:
  double centre_;
};

TwoPlayerPolicy small_policy(double delta, std::uint64_t seed) {
  Rng rng(seed);
  return make_two_player_policy(1, 1, {4}, Activation::Tanh, MixingConfig{delta}, 0.3, rng);
}

ToyMdpConfig short_env() {
  ToyMdpConfig env;
  env.horizon = 50;
  return env;
}

VpgConfig short_cfg() {
  VpgConfig cfg;
  cfg.total_steps = 40;
  cfg.hidden = {8};
  return cfg;
}

}  // namespace

TEST(ReturnsToGo, UnitDiscount) {
  const std::vector<double> r{1.0, 0.0, 0.0};
  EXPECT_EQ(returns_to_go(r, 1.0), (std::vector<double>{1.0, 0.0, 0.0}));
  const std::vector<double> ones{1.0, 1.0, 1.0};
  EXPECT_EQ(returns_to_go(ones, 1.0), (std::vector<double>{3.0, 2.0, 1.0}));
  EXPECT_EQ(returns_to_go(ones, 0.5), (std::vector<double>{1.75, 1.5, 1.0}));
}

TEST(ReturnsToGo, SatisfiesRecursion) {
  Rng rng(3);
  std::vector<double> r(200);
  for (auto& x : r) x = rng.uniform(1, 5);
  const auto g = returns_to_go(r, 0.97);
  for (std::size_t t = 0; t + 1 < r.size(); ++t) EXPECT_NEAR(g[t], r[t] + 0.97 * g[t + 1], 1e-12);
  EXPECT_NEAR(g[0], discounted_return(r, 0.97), 1e-10);
  EXPECT_THROW(returns_to_go(r, 0.0), std::invalid_argument);
  EXPECT_THROW(returns_to_go(r, 1.5), std::invalid_argument);
}

TEST(VpgGradients, AdversaryGradientVanishesWithoutMixing) {
  const auto policy = small_policy(0.0, 1);
  ToyMdpEnv env(short_env());
  Rng e(1), p(2);
  const std::vector<Trajectory> trajs{collect_trajectory(env, policy, e, p)};
  const auto g = vpg_gradients(trajs, policy, VpgConfig{});
  EXPECT_TRUE(g.adversary.isZero(0.0));
  EXPECT_GT(g.agent.norm(), 0.0);
}

TEST(VpgGradients, ZeroRewardsGiveZeroGradients) {
  const auto policy = small_policy(0.2, 1);
  ToyMdpEnv env(short_env());
  Rng e(1), p(2);
  Trajectory t = collect_trajectory(env, policy, e, p);
  std::fill(t.rewards.begin(), t.rewards.end(), 0.0);
  const std::vector<Trajectory> trajs{t};
  const auto g = vpg_gradients(trajs, policy, VpgConfig{});
  EXPECT_TRUE(g.agent.isZero(0.0));
  EXPECT_TRUE(g.adversary.isZero(0.0));
  EXPECT_THROW(vpg_gradients(std::span<const Trajectory>{}, policy, VpgConfig{}), std::invalid_argument);
}

TEST(VpgGradients, TrajectoryHonoursMixingAndBounds) {
  const auto policy = small_policy(0.25, 4);
  ToyMdpEnv env(short_env());
  Rng e(5), p(6);
  const auto t = collect_trajectory(env, policy, e, p);
  ASSERT_EQ(t.length(), 50u);
  EXPECT_LE(t.agent_actions.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(t.adversary_actions.cwiseAbs().maxCoeff(), 1.0);
  const Eigen::MatrixXd mixed = 0.75 * t.agent_actions + 0.25 * t.adversary_actions;
  EXPECT_LT((mixed - t.mixed_actions).cwiseAbs().maxCoeff(), 1e-15);
}

// The agent gradient is (1 - delta) times the score-function estimate of
// dJ/dtheta. For the bandit J = -((1-delta) mu + delta nu - c)^2 - const, so
// its projection on dmu/dtheta has a closed form.
TEST(VpgGradients, ScoreFunctionIsUnbiased) {
  const double delta = 0.3, centre = 0.8;
  const auto policy = small_policy(delta, 11);
  QuadraticBandit env(centre);
  const Eigen::VectorXd obs = Eigen::VectorXd::Constant(1, 0.3);
  const double mu = mlp_forward(policy.agent, {obs.data(), 1})[0];
  const double nu = mlp_forward(policy.adversary, {obs.data(), 1})[0];
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  const FlatGrad dmu = mlp_backward(policy.agent, {obs.data(), 1}, {one.data(), 1});
  const FlatGrad dnu = mlp_backward(policy.adversary, {obs.data(), 1}, {one.data(), 1});
  const double mix = (1 - delta) * mu + delta * nu - centre;
  const double want_agent = (1 - delta) * (-2.0 * (1 - delta) * mix);
  const double want_adv = delta * (-2.0 * delta * mix);

  Rng e(0), p(1);
  const int n = 40000;
  double sa = 0, sa2 = 0, sb = 0, sb2 = 0;
  for (int i = 0; i < n; ++i) {
    const std::vector<Trajectory> one_traj{collect_trajectory(env, policy, e, p)};
    const auto g = vpg_gradients(one_traj, policy, VpgConfig{});
    const double a = g.agent.dot(dmu) / dmu.squaredNorm();
    const double b = g.adversary.dot(dnu) / dnu.squaredNorm();
    sa += a;
    sa2 += a * a;
    sb += b;
    sb2 += b * b;
  }
  const double ma = sa / n, mb = sb / n;
  const double se_a = std::sqrt((sa2 / n - ma * ma) / n), se_b = std::sqrt((sb2 / n - mb * mb) / n);
  EXPECT_LT(std::abs(ma - want_agent), 4 * se_a) << ma << " vs " << want_agent;
  EXPECT_LT(std::abs(mb - want_adv), 4 * se_b) << mb << " vs " << want_adv;
}

TEST(VpgTraining, SameSeedSameRun) {
  const auto init = initial_vpg_policy(short_cfg(), MixingConfig{0.1}, 7);
  const auto a = vpg_mixed_ne_ld_train(short_env(), init, short_cfg(), 7);
  const auto b = vpg_mixed_ne_ld_train(short_env(), init, short_cfg(), 7);
  EXPECT_EQ(a.policy.agent, b.policy.agent);
  EXPECT_EQ(a.policy.adversary, b.policy.adversary);
  EXPECT_EQ(a.record, b.record);
  const auto c = vpg_mixed_ne_ld_train(short_env(), init, short_cfg(), 8);
  EXPECT_NE(a.policy.agent, c.policy.agent);
  EXPECT_EQ(a.record.rows.size(), 40u);
}

TEST(VpgTraining, ZeroLearningRateKeepsPolicy) {
  auto cfg = short_cfg();
  cfg.learning_rate = 0.0;
  cfg.thermal_noise_init = 0.0;
  const auto init = initial_vpg_policy(cfg, MixingConfig{0.1}, 3);
  EXPECT_EQ(vpg_mixed_ne_ld_train(short_env(), init, cfg, 3).policy.agent, init.agent);
  EXPECT_EQ(vpg_gad_train(short_env(), init, cfg, 3).policy.adversary, init.adversary);
}

TEST(VpgTraining, AdversaryFrozenWithoutMixing) {
  auto cfg = short_cfg();
  cfg.inner_steps = 4;
  cfg.thermal_noise_init = 1e-2;
  const auto init = initial_vpg_policy(cfg, MixingConfig{0.0}, 5);
  const auto ld = vpg_mixed_ne_ld_train(short_env(), init, cfg, 5);
  EXPECT_EQ(ld.policy.adversary, init.adversary);
  EXPECT_NE(ld.policy.agent, init.agent);
  const auto gad = vpg_gad_train(short_env(), init, cfg, 5);
  EXPECT_EQ(gad.policy.adversary, init.adversary);
}

TEST(VpgTraining, NoiselessSingleStepLangevinReducesToGad) {
  auto cfg = short_cfg();
  cfg.thermal_noise_init = 0.0;
  cfg.inner_steps = 1;
  cfg.damping = 1.0;
  const auto init = initial_vpg_policy(cfg, MixingConfig{0.2}, 9);
  const auto ld = vpg_mixed_ne_ld_train(short_env(), init, cfg, 9);
  const auto gad = vpg_gad_train(short_env(), init, cfg, 9);
  EXPECT_EQ(ld.policy.agent, gad.policy.agent);
  EXPECT_EQ(ld.policy.adversary, gad.policy.adversary);
  EXPECT_EQ(ld.record, gad.record);
}

TEST(VpgTraining, BudgetCountsUpdatesAcrossInnerLoops) {
  auto cfg = short_cfg();
  cfg.inner_steps = 3;
  cfg.total_steps = 10;
  const auto init = initial_vpg_policy(cfg, MixingConfig{0.1}, 1);
  const auto ld = vpg_mixed_ne_ld_train(short_env(), init, cfg, 1);
  ASSERT_EQ(ld.record.rows.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(ld.record.rows[i].step, i);
  EXPECT_EQ(ld.record.rows[0].warmup_k, 3u);
}

TEST(VpgTraining, ConfigValidation) {
  VpgConfig cfg;
  cfg.inner_steps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.policy_std = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.damping = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(VpgTraining, GadImprovesOnRandomActions) {
  VpgConfig cfg;
  cfg.total_steps = 1500;
  ToyMdpConfig env;
  env.rho = 0.0;
  const auto init = initial_vpg_policy(cfg, MixingConfig{0.1}, 2);
  const auto trained = vpg_gad_train(env, init, cfg, 2);
  const auto random = evaluate_random_policy(env, 50, 1);
  const auto score = evaluate_policy(trained.policy, env, 50, 1);
  EXPECT_GT(score.mean, random.mean + 3 * random.std / std::sqrt(50.0));
}
