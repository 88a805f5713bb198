#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mixne/checkpoint.hpp"
#include "mixne/mlp.hpp"
#include "mixne/rng.hpp"

using namespace mixne;

namespace {

double loss(const MlpParams& net, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  return u.dot(mlp_forward(net, {x.data(), static_cast<std::size_t>(x.size())}));
}

Eigen::VectorXd random_vec(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (auto& e : v) e = rng.uniform(-1, 1);
  return v;
}

}  // namespace

TEST(Mlp, ZeroNetworkOutputsActivationOfZero) {
  const MlpParams net({2, 4, 1}, Activation::Relu, Activation::Tanh);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 0.7);
  EXPECT_EQ(mlp_forward(net, {x.data(), 2})[0], 0.0);
  EXPECT_EQ(net.parameter_count(), 2u * 4 + 4 + 4 + 1);
}

TEST(Mlp, HandBuiltForwardPass) {
  MlpParams net({2, 2, 1}, Activation::Relu, Activation::Identity);
  net.weight(0) << 1.0, -1.0, 0.5, 0.5;
  net.bias(0) << 0.0, -1.0;
  net.weight(1) << 2.0, 3.0;
  net.bias(1) << 0.25;
  const Eigen::Vector2d x(1.0, 3.0);
  // hidden: relu(1 - 3) = 0, relu(0.5 + 1.5 - 1) = 1 -> 2*0 + 3*1 + 0.25
  EXPECT_DOUBLE_EQ(mlp_forward(net, {x.data(), 2})[0], 3.25);
}

TEST(Mlp, FlatLayoutIsRowMajorWeightsThenBias) {
  MlpParams net({3, 2}, Activation::Tanh, Activation::Identity);
  for (Eigen::Index i = 0; i < net.values().size(); ++i) net.values()[i] = static_cast<double>(i);
  EXPECT_EQ(net.weight(0)(0, 1), 1.0);
  EXPECT_EQ(net.weight(0)(1, 0), 3.0);
  EXPECT_EQ(net.bias(0)[1], 7.0);
  EXPECT_EQ(net.bias_offset(0), 6u);
}

TEST(Mlp, BackpropMatchesCentralDifferences) {
  Rng rng(21);
  for (auto act : {Activation::Tanh, Activation::Relu}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int in = 1 + static_cast<int>(rng.index(4));
      const int out = 1 + static_cast<int>(rng.index(3));
      const auto net = MlpParams::random({in, 6, 5, out}, act, trial % 2 ? Activation::Tanh : Activation::Identity, rng);
      const Eigen::VectorXd x = random_vec(in, rng), u = random_vec(out, rng);
      const FlatGrad g = mlp_backward(net, {x.data(), static_cast<std::size_t>(in)},
                                      {u.data(), static_cast<std::size_t>(out)});
      MlpParams probe = net;
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double h = 1e-6, v = probe.values()[i];
        probe.values()[i] = v + h;
        const double fp = loss(probe, x, u);
        probe.values()[i] = v - h;
        const double fm = loss(probe, x, u);
        probe.values()[i] = v;
        const double fd = (fp - fm) / (2 * h);
        ASSERT_NEAR(g[i], fd, 1e-4 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Mlp, InputGradientMatchesDifferences) {
  Rng rng(8);
  const auto net = MlpParams::random({3, 8, 2}, Activation::Tanh, Activation::Identity, rng);
  Eigen::MatrixXd x(3, 4), u(2, 4);
  for (auto& e : x.reshaped()) e = rng.uniform(-1, 1);
  for (auto& e : u.reshaped()) e = rng.uniform(-1, 1);
  ForwardCache cache;
  mlp_forward_batch(net, x, &cache);
  const auto full = mlp_backward_batch(net, cache, u);
  const Eigen::MatrixXd only = mlp_input_gradient_batch(net, cache, u);
  EXPECT_EQ(full.inputs, only);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      Eigen::VectorXd xp = x.col(c), xm = x.col(c);
      xp[r] += 1e-6;
      xm[r] -= 1e-6;
      const double fd = (loss(net, xp, u.col(c)) - loss(net, xm, u.col(c))) / 2e-6;
      EXPECT_NEAR(full.inputs(r, c), fd, 1e-7);
    }
  }
}

TEST(Mlp, BatchBackwardMatchesPerSampleReference) {
  Rng rng(13);
  const auto net = MlpParams::random({2, 16, 16, 1}, Activation::Relu, Activation::Tanh, rng);
  Eigen::MatrixXd x(2, 37), u(1, 37);
  for (auto& e : x.reshaped()) e = rng.uniform(-1, 1);
  for (auto& e : u.reshaped()) e = rng.uniform(-1, 1);
  ForwardCache cache;
  mlp_forward_batch(net, x, &cache);
  const FlatGrad batched = mlp_backward_batch(net, cache, u).params;
  const FlatGrad serial = mlp_backward_batch_serial(net, x, u);
  EXPECT_LT((batched - serial).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mlp, BatchForwardMatchesColumnwise) {
  Rng rng(1);
  const auto net = MlpParams::random({3, 5, 2}, Activation::Tanh, Activation::Tanh, rng);
  Eigen::MatrixXd x(3, 6);
  for (auto& e : x.reshaped()) e = rng.uniform(-2, 2);
  const Eigen::MatrixXd y = mlp_forward_batch(net, x);
  for (Eigen::Index c = 0; c < 6; ++c) {
    const Eigen::VectorXd xc = x.col(c);
    EXPECT_EQ(Eigen::VectorXd(y.col(c)), mlp_forward(net, {xc.data(), 3}));
  }
}

TEST(Mlp, FastTanhAgreesWithStd) {
  Eigen::ArrayXXd x(1, 20001);
  for (Eigen::Index i = 0; i < x.cols(); ++i) x(0, i) = -25.0 + 50.0 * static_cast<double>(i) / 20000.0;
  x(0, 10000) = 0.0;
  const Eigen::ArrayXXd y = fast_tanh(x);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const double ref = std::tanh(x(0, i));
    ASSERT_LE(std::abs(y(0, i) - ref), 4e-15 * std::max(std::abs(ref), 1e-300)) << x(0, i);
  }
  EXPECT_EQ(fast_tanh(Eigen::ArrayXXd::Zero(1, 1))(0, 0), 0.0);
  const Eigen::ArrayXXd tiny = Eigen::ArrayXXd::Constant(1, 1, 1e-300);
  EXPECT_EQ(fast_tanh(tiny)(0, 0), 1e-300);
}

TEST(Mlp, RandomInitRespectsFanInBound) {
  Rng rng(2);
  const auto net = MlpParams::random({4, 9, 1}, Activation::Tanh, Activation::Identity, rng);
  EXPECT_LE(net.weight(0).cwiseAbs().maxCoeff(), 0.5);
  EXPECT_LE(net.weight(1).cwiseAbs().maxCoeff(), 1.0 / 3.0);
}

TEST(Mlp, ShapeErrors) {
  EXPECT_THROW(MlpParams({3}, Activation::Tanh, Activation::Tanh), std::invalid_argument);
  EXPECT_THROW(MlpParams({3, 0, 1}, Activation::Tanh, Activation::Tanh), std::invalid_argument);
  const MlpParams net({2, 1}, Activation::Tanh, Activation::Tanh);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(mlp_forward(net, {x.data(), 3}), std::invalid_argument);
  EXPECT_THROW(activation_from_string("sigmoid"), std::invalid_argument);
}

TEST(Checkpoint, RoundTripIsExact) {
  Rng rng(31);
  const auto net = MlpParams::random({1, 16, 16, 1}, Activation::Relu, Activation::Tanh, rng);
  std::stringstream buf;
  save_mlp(net, buf);
  const auto back = load_mlp(buf);
  EXPECT_EQ(back, net);
  EXPECT_EQ(back.hidden_activation(), Activation::Relu);
}

TEST(Checkpoint, MalformedInputThrows) {
  std::stringstream bad("mixne-mlp 1\nlayer_sizes 2 3 1\nhidden tanh\noutput tanh\nparameters 5\n0\n");
  EXPECT_THROW(load_mlp(bad), std::runtime_error);
  std::stringstream wrong_magic("not-a-checkpoint");
  EXPECT_THROW(load_mlp(wrong_magic), std::runtime_error);
  std::stringstream truncated("mixne-mlp 1\nlayer_sizes 2 1 1\nhidden tanh\noutput tanh\nparameters 2\n0.5\n");
  EXPECT_THROW(load_mlp(truncated), std::runtime_error);
}
