#include "mixne/ddpg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixne/optim.hpp"
#include "mixne/rng.hpp"
#include "mixne/vpg.hpp"

namespace mixne {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kEnvStream = 2;
constexpr std::uint64_t kExploreStream = 3;
constexpr std::uint64_t kSampleStream = 4;
constexpr std::uint64_t kLangevinStream = 5;
constexpr std::uint64_t kHeldoutEnvStream = 6;
constexpr std::uint64_t kHeldoutExploreStream = 7;

struct Trainer {
  const DdpgConfig& cfg;
  TwoPlayerPolicy policy;
  TwoPlayerPolicy target;
  MlpParams critic;
  MlpParams critic_target;
  AdamState adam;
  RmsState m;
  RmsState m_adv;
  ReplayBuffer buffer;
  Rng sample_rng;
  Rng langevin_rng;
  bool adversary_active;
  std::size_t t = 1;

  Trainer(const DdpgConfig& c, int obs_dim, int action_dim, std::uint64_t seed)
      : cfg(c),
        buffer(c.buffer_capacity),
        sample_rng(derive_seed(seed, kSampleStream)),
        langevin_rng(derive_seed(seed, kLangevinStream)),
        adversary_active(c.mixing.delta != 0.0) {
    Rng init(derive_seed(seed, kInitStream));
    policy = make_two_player_policy(obs_dim, action_dim, cfg.actor_hidden, cfg.hidden_activation, cfg.mixing,
                                    0.0, init);
    std::vector<int> sizes{obs_dim + action_dim};
    sizes.insert(sizes.end(), cfg.critic_hidden.begin(), cfg.critic_hidden.end());
    sizes.push_back(1);
    critic = MlpParams::random(sizes, cfg.hidden_activation, Activation::Identity, init);
    target = policy;
    critic_target = critic;
    adam = AdamState::zeros(critic.parameter_count(), cfg.critic_lr);
    m = RmsState::zeros(policy.agent.parameter_count(), cfg.rms_decay, cfg.rms_floor);
    m_adv = RmsState::zeros(policy.adversary.parameter_count(), cfg.rms_decay, cfg.rms_floor);
  }

  void critic_step(const Batch& b) {
    const Eigen::VectorXd y = ddpg_td_target(b, critic_target, target, cfg.discount);
    adam_update(critic.values(), critic_gradient(b, critic, y), adam);
  }

  void track_targets(const MlpParams& agent, const MlpParams& adversary) {
    soft_update(critic_target.values(), critic.values(), cfg.soft_update);
    soft_update(target.agent.values(), agent.values(), cfg.soft_update);
    if (adversary_active) soft_update(target.adversary.values(), adversary.values(), cfg.soft_update);
  }

  void mixed_ne_ld_update() {
    const double sigma = cfg.thermal_noise(t);
    const std::size_t k_t = cfg.warmup_steps(t);
    const double delta = cfg.mixing.delta;
    const MlpParams& theta_t = policy.agent;
    const MlpParams& omega_t = policy.adversary;
    MlpParams theta = theta_t;
    MlpParams omega = omega_t;
    Eigen::VectorXd theta_avg = theta_t.values();
    Eigen::VectorXd omega_avg = omega_t.values();
    for (std::size_t k = 0; k < k_t; ++k) {
      const Batch b = buffer.sample(cfg.batch_size, sample_rng);
      critic_step(b);
      const FlatGrad g = ddpg_player_gradient(b.s, critic, theta, omega_t, delta, Player::Agent);
      sgld_update(theta.values(), g, m, cfg.actor_lr, sigma, Direction::Ascend, langevin_rng);
      if (adversary_active) {
        const FlatGrad g_adv = ddpg_player_gradient(b.s, critic, theta_t, omega, delta, Player::Adversary);
        sgld_update(omega.values(), g_adv, m_adv, cfg.actor_lr, sigma, Direction::Descend, langevin_rng);
        omega_avg = damped_average(omega_avg, omega.values(), cfg.damping);
      }
      theta_avg = damped_average(theta_avg, theta.values(), cfg.damping);
      track_targets(theta, omega);
    }
    policy.agent.values() = damped_average(policy.agent.values(), theta_avg, cfg.damping);
    if (adversary_active) {
      policy.adversary.values() = damped_average(policy.adversary.values(), omega_avg, cfg.damping);
    }
  }

  void gad_update() {
    const double delta = cfg.mixing.delta;
    const Batch b = buffer.sample(cfg.batch_size, sample_rng);
    critic_step(b);
    const FlatGrad g = ddpg_player_gradient(b.s, critic, policy.agent, policy.adversary, delta, Player::Agent);
    sgld_update(policy.agent.values(), g, m, cfg.actor_lr, 0.0, Direction::Ascend, langevin_rng);
    if (adversary_active) {
      const FlatGrad g_adv =
          ddpg_player_gradient(b.s, critic, policy.agent, policy.adversary, delta, Player::Adversary);
      sgld_update(policy.adversary.values(), g_adv, m_adv, cfg.actor_lr, 0.0, Direction::Descend, langevin_rng);
    }
    track_targets(policy.agent, policy.adversary);
  }
};

Eigen::VectorXd mixed_action(const TwoPlayerPolicy& p, const Eigen::VectorXd& obs, double noise, Rng& rng,
                             double lo, double hi) {
  const auto a = sample_action(p.agent, obs, noise, rng, lo, hi);
  const auto a_adv = sample_action(p.adversary, obs, noise, rng, lo, hi);
  return (1.0 - p.mixing.delta) * a.action + p.mixing.delta * a_adv.action;
}

Batch collect_heldout(Environment& env, const TwoPlayerPolicy& policy, const DdpgConfig& cfg,
                      std::uint64_t seed) {
  Rng env_rng(derive_seed(seed, kHeldoutEnvStream));
  Rng explore(derive_seed(seed, kHeldoutExploreStream));
  std::vector<Transition> out;
  out.reserve(cfg.heldout_size);
  Eigen::VectorXd obs = env.reset(env_rng);
  while (out.size() < cfg.heldout_size) {
    Eigen::VectorXd a_bar = mixed_action(policy, obs, cfg.action_noise, explore, env.action_lo(), env.action_hi());
    auto tr = env.step(a_bar, env_rng);
    out.push_back({obs, std::move(a_bar), tr.reward, tr.observation, tr.done});
    obs = tr.done ? env.reset(env_rng) : std::move(tr.observation);
  }
  return make_batch(out);
}

enum class Variant { MixedNeLd, Gad };

DdpgResult train(const EnvironmentFactory& make_env, const DdpgConfig& cfg, std::uint64_t seed,
                 Variant variant) {
  cfg.validate();
  auto env = make_env();
  auto heldout_env = make_env();
  Trainer tr(cfg, env->observation_dim(), env->action_dim(), seed);
  const TwoPlayerPolicy initial = tr.policy;
  const Batch heldout = collect_heldout(*heldout_env, initial, cfg, seed);
  const auto heldout_loss = [&] {
    return critic_loss(heldout, tr.critic, ddpg_td_target(heldout, tr.critic_target, tr.target, cfg.discount));
  };

  DdpgResult result;
  result.record.seed = seed;
  result.record.initial_critic_loss = heldout_loss();

  Rng env_rng(derive_seed(seed, kEnvStream));
  Rng explore(derive_seed(seed, kExploreStream));
  Eigen::VectorXd obs = env->reset(env_rng);
  std::vector<double> rewards;
  for (std::size_t step = 0; step < cfg.total_steps; ++step) {
    Eigen::VectorXd a_bar = mixed_action(tr.policy, obs, cfg.action_noise, explore, env->action_lo(),
                                         env->action_hi());
    auto next = env->step(a_bar, env_rng);
    rewards.push_back(next.reward);
    tr.buffer.push({obs, std::move(a_bar), next.reward, next.observation, next.done});
    obs = next.done ? env->reset(env_rng) : std::move(next.observation);

    if (tr.buffer.size() >= cfg.batch_size) {
      if (variant == Variant::MixedNeLd) {
        tr.mixed_ne_ld_update();
      } else {
        tr.gad_update();
      }
      ++tr.t;
      ++result.updates;
    }
    if (next.done) {
      const bool ld = variant == Variant::MixedNeLd;
      result.record.rows.push_back({step + 1, discounted_return(rewards, env->discount()), heldout_loss(),
                                    ld ? cfg.thermal_noise(tr.t) : 0.0, ld ? cfg.warmup_steps(tr.t) : 1});
      rewards.clear();
    }
  }
  result.record.final_critic_loss = heldout_loss();
  result.policy = std::move(tr.policy);
  result.initial_policy = initial;
  result.target_policy = std::move(tr.target);
  result.critic = std::move(tr.critic);
  result.critic_target = std::move(tr.critic_target);
  return result;
}

EnvironmentFactory toy_factory(const ToyMdpConfig& env_cfg) {
  env_cfg.validate();
  return [env_cfg] { return std::make_unique<ToyMdpEnv>(env_cfg); };
}

}  // namespace

void DdpgConfig::validate() const {
  if (!(critic_lr >= 0.0)) throw std::invalid_argument("critic_lr must be non-negative");
  if (!(soft_update >= 0.0 && soft_update <= 1.0)) throw std::invalid_argument("soft_update must lie in [0, 1]");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("discount must lie in [0, 1]");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (!(action_noise >= 0.0)) throw std::invalid_argument("action_noise must be non-negative");
  if (!(thermal_noise_init >= 0.0)) throw std::invalid_argument("thermal noise must be non-negative");
  if (!(thermal_decay >= 0.0 && thermal_decay < 1.0)) throw std::invalid_argument("thermal_decay must lie in [0, 1)");
  if (warmup_cap == 0) throw std::invalid_argument("warmup_cap must be positive");
  if (!(warmup_growth >= 0.0)) throw std::invalid_argument("warmup_growth must be non-negative");
  if (!(rms_decay > 0.0 && rms_decay < 1.0)) throw std::invalid_argument("rms_decay must lie in (0, 1)");
  if (!(rms_floor > 0.0)) throw std::invalid_argument("rms_floor must be positive");
  if (!(actor_lr >= 0.0)) throw std::invalid_argument("actor_lr must be non-negative");
  if (buffer_capacity < batch_size) throw std::invalid_argument("buffer_capacity must hold a batch");
  if (heldout_size == 0) throw std::invalid_argument("heldout_size must be positive");
  mixing.validate();
}

double DdpgConfig::thermal_noise(std::size_t t) const {
  return thermal_noise_init * std::pow(1.0 - thermal_decay, static_cast<double>(t));
}

std::size_t DdpgConfig::warmup_steps(std::size_t t) const {
  const double k = std::floor(std::pow(1.0 + warmup_growth, static_cast<double>(t)));
  if (!(k < static_cast<double>(warmup_cap))) return warmup_cap;
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

Batch make_batch(const std::vector<Transition>& transitions) {
  if (transitions.empty()) throw std::invalid_argument("batch must be nonempty");
  const auto n = static_cast<Eigen::Index>(transitions.size());
  const auto& first = transitions.front();
  Batch b;
  b.s.resize(first.s.size(), n);
  b.a_bar.resize(first.a_bar.size(), n);
  b.s_next.resize(first.s_next.size(), n);
  b.r.resize(n);
  b.done.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = transitions[static_cast<std::size_t>(i)];
    b.s.col(i) = t.s;
    b.a_bar.col(i) = t.a_bar;
    b.s_next.col(i) = t.s_next;
    b.r[i] = t.r;
    b.done[i] = t.done ? 1.0 : 0.0;
  }
  return b;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("replay index out of range");
  return data_[(head_ + i) % data_.size()];
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (data_.empty()) throw std::logic_error("cannot sample from an empty replay buffer");
  std::vector<Transition> picked;
  picked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) picked.push_back(data_[rng.index(data_.size())]);
  return make_batch(picked);
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) {
  if (states.cols() != actions.cols()) throw std::invalid_argument("state/action batch size mismatch");
  Eigen::MatrixXd x(states.rows() + actions.rows(), states.cols());
  x.topRows(states.rows()) = states;
  x.bottomRows(actions.rows()) = actions;
  return x;
}

Eigen::VectorXd ddpg_td_target(const Batch& batch, const MlpParams& critic_targ,
                               const TwoPlayerPolicy& policy_targ, double gamma) {
  if (batch.size() == 0) throw std::invalid_argument("batch must be nonempty");
  const double delta = policy_targ.mixing.delta;
  const Eigen::MatrixXd a_next = (1.0 - delta) * mlp_forward_batch(policy_targ.agent, batch.s_next) +
                                 delta * mlp_forward_batch(policy_targ.adversary, batch.s_next);
  const Eigen::VectorXd q = mlp_forward_batch(critic_targ, critic_input(batch.s_next, a_next)).row(0).transpose();
  return batch.r.array() + gamma * (1.0 - batch.done.array()) * q.array();
}

double critic_loss(const Batch& batch, const MlpParams& critic, const Eigen::VectorXd& targets) {
  const Eigen::VectorXd q = mlp_forward_batch(critic, critic_input(batch.s, batch.a_bar)).row(0).transpose();
  return (targets - q).squaredNorm() / static_cast<double>(batch.size());
}

FlatGrad critic_gradient(const Batch& batch, const MlpParams& critic, const Eigen::VectorXd& targets) {
  ForwardCache cache;
  const Eigen::MatrixXd q = mlp_forward_batch(critic, critic_input(batch.s, batch.a_bar), &cache);
  const Eigen::MatrixXd upstream =
      (-2.0 / static_cast<double>(batch.size())) * (targets.transpose() - q);
  return mlp_backward_batch(critic, cache, upstream).params;
}

FlatGrad ddpg_player_gradient(const Eigen::MatrixXd& states, const MlpParams& critic,
                              const MlpParams& agent, const MlpParams& adversary, double delta,
                              Player mover) {
  const MlpParams& net = mover == Player::Agent ? agent : adversary;
  const double weight = mover == Player::Agent ? 1.0 - delta : delta;
  if (weight == 0.0) return FlatGrad::Zero(static_cast<Eigen::Index>(net.parameter_count()));

  ForwardCache mover_cache;
  const Eigen::MatrixXd mu = mlp_forward_batch(agent, states, mover == Player::Agent ? &mover_cache : nullptr);
  const Eigen::MatrixXd nu =
      mlp_forward_batch(adversary, states, mover == Player::Adversary ? &mover_cache : nullptr);
  const Eigen::MatrixXd a_bar = (1.0 - delta) * mu + delta * nu;

  ForwardCache q_cache;
  mlp_forward_batch(critic, critic_input(states, a_bar), &q_cache);
  const Eigen::MatrixXd dq_da =
      mlp_input_gradient_batch(critic, q_cache, Eigen::MatrixXd::Ones(1, states.cols())).bottomRows(a_bar.rows());
  return mlp_backward_batch(net, mover_cache, dq_da).params * (weight / static_cast<double>(states.cols()));
}

PolicyGradients ddpg_actor_gradients(const Batch& batch, const MlpParams& critic,
                                     const TwoPlayerPolicy& policy) {
  if (batch.size() == 0) throw std::invalid_argument("batch must be nonempty");
  const double delta = policy.mixing.delta;
  return {ddpg_player_gradient(batch.s, critic, policy.agent, policy.adversary, delta, Player::Agent),
          ddpg_player_gradient(batch.s, critic, policy.agent, policy.adversary, delta, Player::Adversary)};
}

DdpgResult ddpg_mixed_ne_ld_train(const EnvironmentFactory& make_env, const DdpgConfig& cfg,
                                  std::uint64_t rng_seed) {
  return train(make_env, cfg, rng_seed, Variant::MixedNeLd);
}

DdpgResult ddpg_gad_train(const EnvironmentFactory& make_env, const DdpgConfig& cfg,
                          std::uint64_t rng_seed) {
  return train(make_env, cfg, rng_seed, Variant::Gad);
}

DdpgResult ddpg_mixed_ne_ld_train(const ToyMdpConfig& env_cfg, const DdpgConfig& cfg,
                                  std::uint64_t rng_seed) {
  return train(toy_factory(env_cfg), cfg, rng_seed, Variant::MixedNeLd);
}

DdpgResult ddpg_gad_train(const ToyMdpConfig& env_cfg, const DdpgConfig& cfg, std::uint64_t rng_seed) {
  return train(toy_factory(env_cfg), cfg, rng_seed, Variant::Gad);
}

}  // namespace mixne
