#pragma once

// Two-player REINFORCE on the noisy-robust MDP. Each player is a Gaussian
// policy with a tanh-headed mean network and a fixed std. The executed action
// is (1 - delta) a + delta a' of the clamped player actions.
//
// Trainers:
//   vpg_mixed_ne_ld_train  nested RMSProp-preconditioned Langevin loop with
//                          damped running averages and a damped outer commit
//   vpg_gad_train          single-loop RMSProp ascent (agent) / descent
//                          (adversary)
//
// Both stop after cfg.total_steps policy updates (trajectory collections).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixne/mlp.hpp"
#include "mixne/policy.hpp"
#include "mixne/run_record.hpp"
#include "mixne/toy_mdp.hpp"

namespace mixne {

class Rng;

struct VpgConfig {
  double discount = 0.99;
  std::size_t trajectories_per_step = 1;
  double rms_decay = 0.99;
  double rms_floor = 1e-8;
  double learning_rate = 1e-3;
  double damping = 0.9;
  std::size_t inner_steps = 1;          ///< N_k (MixedNE-LD only)
  double thermal_noise_init = 1e-5;     ///< sigma_0 (MixedNE-LD only)
  double thermal_decay = 5e-5;          ///< sigma_k = sigma_0 (1 - thermal_decay)^k
  std::size_t total_steps = 5000;
  double policy_std = 0.3;
  std::vector<int> hidden{16, 16};
  Activation hidden_activation = Activation::Relu;

  void validate() const;
};

/// One episode. Columns are time steps.
struct Trajectory {
  Eigen::MatrixXd observations;
  Eigen::MatrixXd agent_actions;       ///< clamped
  Eigen::MatrixXd adversary_actions;   ///< clamped
  Eigen::MatrixXd mixed_actions;
  Eigen::MatrixXd agent_raw;           ///< pre-clamp draws (score function input)
  Eigen::MatrixXd adversary_raw;
  std::vector<double> rewards;

  [[nodiscard]] std::size_t length() const { return rewards.size(); }
};

/// Runs one full episode with both stochastic players.
Trajectory collect_trajectory(Environment& env, const TwoPlayerPolicy& policy, Rng& env_rng,
                              Rng& policy_rng);

/// G_t = r_t + gamma G_{t+1}, by reverse accumulation.
std::vector<double> returns_to_go(std::span<const double> rewards, double gamma);

/// sum_t gamma^t r_t.
double discounted_return(std::span<const double> rewards, double gamma);

struct PlayerGradients {
  FlatGrad agent;
  FlatGrad adversary;
};

/// g  = (1 - delta)/|D| sum_tau sum_t gamma^t G_t grad_theta log pi(a_t | s_t)
/// g' =  delta     /|D| sum_tau sum_t gamma^t G_t grad_w     log pi'(a'_t | s_t)
/// Throws std::invalid_argument on an empty trajectory set.
PlayerGradients vpg_gradients(std::span<const Trajectory> trajectories,
                              const TwoPlayerPolicy& policy, const VpgConfig& cfg);

struct VpgResult {
  TwoPlayerPolicy policy;
  RunRecord record;
};

/// Starts from the given policy.
VpgResult vpg_mixed_ne_ld_train(const ToyMdpConfig& env_cfg, const TwoPlayerPolicy& policy,
                                const VpgConfig& cfg, std::uint64_t rng_seed);
VpgResult vpg_gad_train(const ToyMdpConfig& env_cfg, const TwoPlayerPolicy& policy,
                        const VpgConfig& cfg, std::uint64_t rng_seed);

/// Seeded initial policy matching cfg's architecture for a 1-D toy MDP.
TwoPlayerPolicy initial_vpg_policy(const VpgConfig& cfg, MixingConfig mixing, std::uint64_t rng_seed);

}  // namespace mixne
