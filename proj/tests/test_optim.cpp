#include <cmath>

#include <gtest/gtest.h>

#include "mixne/optim.hpp"
#include "mixne/rng.hpp"

using namespace mixne;

TEST(Langevin, NoiseFreeUnitPreconditionerIsGradientStep) {
  Rng rng(0);
  Eigen::VectorXd p(3), g(3);
  p << 1.0, -2.0, 0.5;
  g << 0.3, 0.1, -4.0;
  Eigen::VectorXd up = p, down = p;
  langevin_step(up, g, Eigen::VectorXd::Ones(3), 0.01, 0.0, Direction::Ascend, rng);
  langevin_step(down, g, Eigen::VectorXd::Ones(3), 0.01, 0.0, Direction::Descend, rng);
  EXPECT_EQ(up, Eigen::VectorXd(p + 0.01 * g));
  EXPECT_EQ(down, Eigen::VectorXd(p - 0.01 * g));
}

TEST(Langevin, NoDrawsWithoutNoise) {
  Rng used(4), fresh(4);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
  RmsState m = RmsState::zeros(5, 0.99, 1e-8);
  sgld_update(p, Eigen::VectorXd::Ones(5), m, 0.1, 0.0, Direction::Ascend, used);
  EXPECT_EQ(used.uniform(), fresh.uniform());
}

TEST(Langevin, NoiseVarianceMatchesTwoEtaSigmaSquared) {
  Rng rng(6);
  const int n = 200000;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd scale = Eigen::VectorXd::Constant(n, 0.5);
  langevin_step(p, Eigen::VectorXd::Zero(n), scale, 0.02, 3.0, Direction::Ascend, rng);
  const double var = p.squaredNorm() / n;
  const double expect = 2 * 0.02 * 9.0 * 0.25;
  EXPECT_NEAR(var, expect, 5 * expect * std::sqrt(2.0 / n));
}

TEST(Rms, FirstStepFormula) {
  RmsState m = RmsState::zeros(2, 0.9, 1e-8);
  Eigen::Vector2d g(2.0, -1.0);
  const auto pre = rms_precondition(m, g);
  EXPECT_DOUBLE_EQ(m.second_moment[0], 0.1 * 4.0);
  EXPECT_DOUBLE_EQ(pre.scaled_grad[1], -1.0 / std::sqrt(0.1 + 1e-8));
  EXPECT_DOUBLE_EQ(pre.inv_sqrt_scale[0], 1.0 / std::sqrt(std::sqrt(0.4 + 1e-8)));
}

TEST(Rms, RejectsBadSettings) {
  EXPECT_THROW(RmsState::zeros(3, 1.0, 1e-8), std::invalid_argument);
  EXPECT_THROW(RmsState::zeros(3, 0.9, 0.0), std::invalid_argument);
  Rng rng(0);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(langevin_step(p, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(2), 0.1, 0, Direction::Ascend, rng),
               std::invalid_argument);
  EXPECT_THROW(langevin_step(p, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2), 0.1, -1, Direction::Ascend, rng),
               std::invalid_argument);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  AdamState s = AdamState::zeros(3, 1e-3);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  Eigen::Vector3d g(5.0, -0.2, 1e3);
  adam_update(p, g, s);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(p[i]), 1e-3, 1e-9);
  EXPECT_LT(p[0], 0.0);
  EXPECT_GT(p[1], 0.0);
}

TEST(Adam, MinimizesQuadratic) {
  AdamState s = AdamState::zeros(2, 0.05);
  Eigen::VectorXd p(2);
  p << 3.0, -2.0;
  for (int i = 0; i < 2000; ++i) adam_update(p, Eigen::VectorXd(2.0 * p), s);
  EXPECT_LT(p.norm(), 1e-2);
}

TEST(Averaging, DampedAverageEndpoints) {
  Eigen::Vector2d c(1.0, 2.0), i(3.0, -4.0);
  EXPECT_EQ(damped_average(c, i, 1.0), Eigen::VectorXd(i));
  const auto half = damped_average(c, i, 0.5);
  EXPECT_DOUBLE_EQ(half[0], 2.0);
  EXPECT_DOUBLE_EQ(half[1], -1.0);
  EXPECT_THROW(damped_average(c, i, 0.0), std::invalid_argument);
  EXPECT_THROW(damped_average(c, i, 1.5), std::invalid_argument);
}

TEST(Averaging, SoftUpdateStaysBetweenEndpoints) {
  Rng rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd t(4), o(4);
    for (int k = 0; k < 4; ++k) {
      t[k] = rng.uniform(-5, 5);
      o[k] = rng.uniform(-5, 5);
    }
    const double tau = rng.uniform();
    Eigen::VectorXd next = t;
    soft_update(next, o, tau);
    for (int k = 0; k < 4; ++k) {
      EXPECT_GE(next[k], std::min(t[k], o[k]) - 1e-15);
      EXPECT_LE(next[k], std::max(t[k], o[k]) + 1e-15);
    }
  }
  Eigen::VectorXd t = Eigen::VectorXd::Ones(3);
  soft_update(t, Eigen::VectorXd::Zero(3), 1.0);
  EXPECT_EQ(t, Eigen::VectorXd::Ones(3));
}
