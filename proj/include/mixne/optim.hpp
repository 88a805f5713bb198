#pragma once

// Parameter-update rules over flat parameter vectors: RMSProp-preconditioned
// Langevin steps for the players, Adam for critics, and the damped averages
// and soft target updates the trainers compose them with.

#include <cstdint>

#include <Eigen/Dense>

#include "mixne/mlp.hpp"

namespace mixne {

class Rng;

/// RMSProp second-moment accumulator m with decay alpha and floor eps.
/// The preconditioner is C = diag(sqrt(m + eps)).
struct RmsState {
  Eigen::VectorXd second_moment;
  double decay = 0.999;
  double floor = 1e-8;

  static RmsState zeros(std::size_t n, double decay, double floor);
};

struct Preconditioned {
  FlatGrad scaled_grad;              ///< C^-1 g
  Eigen::VectorXd inv_sqrt_scale;    ///< diagonal of C^-1/2
};

/// Updates m <- alpha m + (1 - alpha) g*g in place, then preconditions g.
Preconditioned rms_precondition(RmsState& state, const FlatGrad& grad);

enum class Direction { Ascend, Descend };

/// params <- params +/- eta * scaled_grad + sqrt(2 eta) * sigma * noise_scale * xi.
/// No normal variates are drawn when sigma == 0.
void langevin_step(Eigen::VectorXd& params, const FlatGrad& scaled_grad,
                   const Eigen::VectorXd& noise_scale, double eta, double sigma,
                   Direction direction, Rng& rng);

/// RMSProp-preconditioned Langevin update; with sigma = 0 this is a plain
/// RMSProp step.
void sgld_update(Eigen::VectorXd& params, const FlatGrad& grad, RmsState& state, double eta,
                 double sigma, Direction direction, Rng& rng);

MlpParams sgld_update(const MlpParams& params, const FlatGrad& grad, RmsState& state,
                      double eta, double sigma, Direction direction, Rng& rng);

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::uint64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double floor = 1e-8;
  double learning_rate = 1e-3;

  static AdamState zeros(std::size_t n, double learning_rate);
};

/// Bias-corrected Adam descent step.
void adam_update(Eigen::VectorXd& params, const FlatGrad& grad, AdamState& state);
MlpParams adam_update(const MlpParams& params, const FlatGrad& grad, AdamState& state);

/// (1 - beta) * current + beta * incoming; beta must lie in (0, 1].
Eigen::VectorXd damped_average(const Eigen::VectorXd& current, const Eigen::VectorXd& incoming,
                               double beta);

/// target <- tau * target + (1 - tau) * online.
void soft_update(Eigen::VectorXd& target, const Eigen::VectorXd& online, double tau);

}  // namespace mixne
