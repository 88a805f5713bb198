#pragma once

// Two-player DDPG on the noisy-robust MDP: deterministic agent mu_theta and
// adversary nu_omega, one critic Q_phi([s, a_bar]) trained by Adam on the TD
// target, RMSProp-preconditioned actor updates and soft-tracked target copies.
//
// ddpg_mixed_ne_ld_train runs K_t inner Langevin iterations per update with
// each player's opponent frozen at the outer iterate, damped running averages
// and a damped outer commit. ddpg_gad_train does one plain RMSProp step per
// player per update, agent first.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mixne/mlp.hpp"
#include "mixne/policy.hpp"
#include "mixne/run_record.hpp"
#include "mixne/toy_mdp.hpp"

namespace mixne {

class Rng;

struct DdpgConfig {
  std::vector<int> actor_hidden{64, 64};
  std::vector<int> critic_hidden{64, 64};
  Activation hidden_activation = Activation::Tanh;
  double critic_lr = 1e-3;
  double soft_update = 0.999;          ///< targ <- tau targ + (1 - tau) online
  std::size_t batch_size = 128;
  double discount = 0.99;
  double damping = 0.9;
  double action_noise = 0.1;           ///< exploration std on both players' actions
  double thermal_noise_init = 1e-4;
  double thermal_decay = 5e-5;
  std::size_t warmup_cap = 15;
  double warmup_growth = 1e-5;
  double rms_decay = 0.999;
  double rms_floor = 1e-8;
  double actor_lr = 1e-4;
  std::size_t buffer_capacity = 1'000'000;
  std::size_t total_steps = 20'000;    ///< environment steps
  std::size_t heldout_size = 256;
  MixingConfig mixing{};

  void validate() const;

  /// sigma_t = sigma_0 (1 - thermal_decay)^t
  [[nodiscard]] double thermal_noise(std::size_t t) const;
  /// K_t = min(warmup_cap, floor((1 + warmup_growth)^t)), at least 1.
  [[nodiscard]] std::size_t warmup_steps(std::size_t t) const;
};

struct Transition {
  Eigen::VectorXd s;
  Eigen::VectorXd a_bar;
  double r = 0.0;
  Eigen::VectorXd s_next;
  bool done = false;
};

/// Minibatch in column layout.
struct Batch {
  Eigen::MatrixXd s;
  Eigen::MatrixXd a_bar;
  Eigen::VectorXd r;
  Eigen::MatrixXd s_next;
  Eigen::VectorXd done;   ///< 1 for terminal rows, else 0

  [[nodiscard]] Eigen::Index size() const { return r.size(); }
};

Batch make_batch(const std::vector<Transition>& transitions);

/// Fixed-capacity ring buffer; pushing into a full buffer evicts the oldest
/// transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  /// i = 0 is the oldest stored transition.
  [[nodiscard]] const Transition& at(std::size_t i) const;
  /// n draws uniformly with replacement. Throws std::logic_error when empty.
  [[nodiscard]] Batch sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;   ///< slot of the oldest entry once the buffer is full
  std::vector<Transition> data_;
};

/// Critic input: [state; action] stacked by rows.
Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions);

/// y = r + gamma (1 - d) Q_targ(s', (1 - delta) mu_targ(s') + delta nu_targ(s')).
Eigen::VectorXd ddpg_td_target(const Batch& batch, const MlpParams& critic_targ,
                               const TwoPlayerPolicy& policy_targ, double gamma);

/// Mean squared TD error on a batch for fixed targets y.
double critic_loss(const Batch& batch, const MlpParams& critic, const Eigen::VectorXd& targets);

/// Gradient of critic_loss with respect to the critic parameters.
FlatGrad critic_gradient(const Batch& batch, const MlpParams& critic, const Eigen::VectorXd& targets);

/// weight/N sum_s grad_p mover(s) . dQ/da_bar at a_bar = (1 - delta) agent(s) + delta adversary(s).
/// mover selects which network the gradient is taken for.
enum class Player { Agent, Adversary };
FlatGrad ddpg_player_gradient(const Eigen::MatrixXd& states, const MlpParams& critic,
                              const MlpParams& agent, const MlpParams& adversary, double delta,
                              Player mover);

struct PolicyGradients {
  FlatGrad agent;
  FlatGrad adversary;
};

/// Both gradients at the policy's current parameters. The adversary gradient
/// is exactly zero when delta = 0.
PolicyGradients ddpg_actor_gradients(const Batch& batch, const MlpParams& critic,
                                     const TwoPlayerPolicy& policy);

struct DdpgResult {
  TwoPlayerPolicy policy;
  TwoPlayerPolicy initial_policy;
  TwoPlayerPolicy target_policy;
  MlpParams critic;
  MlpParams critic_target;
  RunRecord record;
  std::size_t updates = 0;
};

using EnvironmentFactory = std::function<std::unique_ptr<Environment>()>;

DdpgResult ddpg_mixed_ne_ld_train(const EnvironmentFactory& make_env, const DdpgConfig& cfg,
                                  std::uint64_t rng_seed);
DdpgResult ddpg_gad_train(const EnvironmentFactory& make_env, const DdpgConfig& cfg,
                          std::uint64_t rng_seed);

DdpgResult ddpg_mixed_ne_ld_train(const ToyMdpConfig& env_cfg, const DdpgConfig& cfg,
                                  std::uint64_t rng_seed);
DdpgResult ddpg_gad_train(const ToyMdpConfig& env_cfg, const DdpgConfig& cfg, std::uint64_t rng_seed);

}  // namespace mixne
