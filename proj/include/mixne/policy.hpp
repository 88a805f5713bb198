#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mixne/mlp.hpp"
#include "mixne/toy_mdp.hpp"

namespace mixne {

class Rng;

/// Agent and adversary networks plus the action-mixing weight. Both networks
/// map observations to tanh-bounded action means. policy_std is the fixed
/// Gaussian std used by stochastic (VPG) policies; deterministic actors
/// ignore it.
struct TwoPlayerPolicy {
  MlpParams agent;
  MlpParams adversary;
  MixingConfig mixing{};
  double policy_std = 0.3;
};

/// Both players get the same architecture: obs_dim -> hidden... -> action_dim
/// with a tanh output head.
TwoPlayerPolicy make_two_player_policy(int obs_dim, int action_dim, const std::vector<int>& hidden,
                                       Activation hidden_activation, MixingConfig mixing,
                                       double policy_std, Rng& rng);

struct ActionSample {
  Eigen::VectorXd action;  ///< clamped to the action bounds; what the env executes
  Eigen::VectorXd raw;     ///< pre-clamp Gaussian draw
  Eigen::VectorXd mean;    ///< network output
};

/// raw = mean + std * xi; no variates are drawn when std == 0.
ActionSample sample_action(const MlpParams& net, const Eigen::VectorXd& observation, double std,
                           Rng& rng, double lo = -1.0, double hi = 1.0);

/// d log N(raw; mean, std^2 I) / d mean = (raw - mean) / std^2. The clamp is
/// treated as part of the environment. Requires std > 0.
Eigen::VectorXd gaussian_score(const Eigen::VectorXd& raw, const Eigen::VectorXd& mean, double std);

}  // namespace mixne
