#include "mixne/vpg.hpp"

#include <cmath>
#include <stdexcept>

#include "mixne/optim.hpp"
#include "mixne/rng.hpp"

namespace mixne {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kPolicyStream = 2;
constexpr std::uint64_t kLangevinStream = 3;
constexpr std::uint64_t kInitStream = 4;

struct Streams {
  Rng env;
  Rng policy;
  Rng langevin;

  explicit Streams(std::uint64_t seed)
      : env(derive_seed(seed, kEnvStream)),
        policy(derive_seed(seed, kPolicyStream)),
        langevin(derive_seed(seed, kLangevinStream)) {}
};

// sum_t w_t * score_t . d mean_t / d params over one trajectory.
FlatGrad weighted_score_gradient(const MlpParams& net, const Eigen::MatrixXd& observations,
                                 const Eigen::MatrixXd& raw, const Eigen::VectorXd& weights,
                                 double std) {
  ForwardCache cache;
  const Eigen::MatrixXd means = mlp_forward_batch(net, observations, &cache);
  Eigen::MatrixXd upstream = (raw - means) / (std * std);
  upstream *= weights.asDiagonal();
  return mlp_backward_batch(net, cache, upstream).params;
}

std::vector<Trajectory> collect(std::size_t count, ToyMdpEnv& env, const TwoPlayerPolicy& policy,
                                Streams& rng) {
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(collect_trajectory(env, policy, rng.env, rng.policy));
  return out;
}

double mean_discounted_return(const std::vector<Trajectory>& trajs, double gamma) {
  double total = 0.0;
  for (const auto& t : trajs) total += discounted_return(t.rewards, gamma);
  return total / static_cast<double>(trajs.size());
}

}  // namespace

void VpgConfig::validate() const {
  if (!(discount > 0.0 && discount <= 1.0)) throw std::invalid_argument("discount must lie in (0, 1]");
  if (trajectories_per_step == 0) throw std::invalid_argument("trajectories_per_step must be positive");
  if (!(rms_decay > 0.0 && rms_decay < 1.0)) throw std::invalid_argument("rms_decay must lie in (0, 1)");
  if (!(rms_floor > 0.0)) throw std::invalid_argument("rms_floor must be positive");
  if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be non-negative");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (inner_steps == 0) throw std::invalid_argument("inner_steps must be positive");
  if (thermal_noise_init < 0.0) throw std::invalid_argument("thermal noise must be non-negative");
  if (!(policy_std > 0.0)) throw std::invalid_argument("training needs a positive policy std");
}

Trajectory collect_trajectory(Environment& env, const TwoPlayerPolicy& policy, Rng& env_rng,
                              Rng& policy_rng) {
  const double std = policy.policy_std;
  const double lo = env.action_lo();
  const double hi = env.action_hi();
  const double delta = policy.mixing.delta;

  std::vector<Eigen::VectorXd> obs, a, a_adv, mixed, raw, raw_adv;
  Trajectory traj;
  Eigen::VectorXd o = env.reset(env_rng);
  bool done = false;
  while (!done) {
    auto s_agent = sample_action(policy.agent, o, std, policy_rng, lo, hi);
    auto s_adv = sample_action(policy.adversary, o, std, policy_rng, lo, hi);
    Eigen::VectorXd a_bar = (1.0 - delta) * s_agent.action + delta * s_adv.action;
    auto tr = env.step(a_bar, env_rng);
    obs.push_back(std::move(o));
    a.push_back(std::move(s_agent.action));
    a_adv.push_back(std::move(s_adv.action));
    raw.push_back(std::move(s_agent.raw));
    raw_adv.push_back(std::move(s_adv.raw));
    mixed.push_back(std::move(a_bar));
    traj.rewards.push_back(tr.reward);
    o = std::move(tr.observation);
    done = tr.done;
  }
  const auto pack = [](const std::vector<Eigen::VectorXd>& cols) {
    Eigen::MatrixXd m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = cols[i];
    return m;
  };
  traj.observations = pack(obs);
  traj.agent_actions = pack(a);
  traj.adversary_actions = pack(a_adv);
  traj.mixed_actions = pack(mixed);
  traj.agent_raw = pack(raw);
  traj.adversary_raw = pack(raw_adv);
  return traj;
}

std::vector<double> returns_to_go(std::span<const double> rewards, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  std::vector<double> g(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    g[i] = acc;
  }
  return g;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

PlayerGradients vpg_gradients(std::span<const Trajectory> trajectories,
                              const TwoPlayerPolicy& policy, const VpgConfig& cfg) {
  if (trajectories.empty()) throw std::invalid_argument("vpg_gradients needs at least one trajectory");
  const double delta = policy.mixing.delta;
  const double std = policy.policy_std;
  PlayerGradients out{FlatGrad::Zero(static_cast<Eigen::Index>(policy.agent.parameter_count())),
                      FlatGrad::Zero(static_cast<Eigen::Index>(policy.adversary.parameter_count()))};
  for (const auto& traj : trajectories) {
    const auto g = returns_to_go(traj.rewards, cfg.discount);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(g.size()));
    double discount = 1.0;
    for (std::size_t t = 0; t < g.size(); ++t) {
      weights[static_cast<Eigen::Index>(t)] = discount * g[t];
      discount *= cfg.discount;
    }
    out.agent += weighted_score_gradient(policy.agent, traj.observations, traj.agent_raw, weights, std);
    if (delta != 0.0) {
      out.adversary +=
          weighted_score_gradient(policy.adversary, traj.observations, traj.adversary_raw, weights, std);
    }
  }
  const double n = static_cast<double>(trajectories.size());
  out.agent *= (1.0 - delta) / n;
  out.adversary *= delta / n;
  return out;
}

TwoPlayerPolicy initial_vpg_policy(const VpgConfig& cfg, MixingConfig mixing, std::uint64_t rng_seed) {
  Rng rng(derive_seed(rng_seed, kInitStream));
  return make_two_player_policy(1, 1, cfg.hidden, cfg.hidden_activation, mixing, cfg.policy_std, rng);
}

VpgResult vpg_mixed_ne_ld_train(const ToyMdpConfig& env_cfg, const TwoPlayerPolicy& policy,
                                const VpgConfig& cfg, std::uint64_t rng_seed) {
  cfg.validate();
  ToyMdpEnv env(env_cfg);
  Streams rng(rng_seed);
  const double beta = cfg.damping;

  VpgResult result{policy, {}};
  result.record.seed = rng_seed;
  TwoPlayerPolicy& outer = result.policy;
  outer.policy_std = cfg.policy_std;
  RmsState m = RmsState::zeros(outer.agent.parameter_count(), cfg.rms_decay, cfg.rms_floor);
  RmsState m_adv = RmsState::zeros(outer.adversary.parameter_count(), cfg.rms_decay, cfg.rms_floor);

  // With delta = 0 the adversary has no influence on the game; it is left
  // untouched rather than diffused by thermal noise.
  const bool adversary_active = outer.mixing.delta != 0.0;
  std::size_t updates = 0;
  for (std::size_t k = 0; updates < cfg.total_steps; ++k) {
    const double sigma = cfg.thermal_noise_init * std::pow(1.0 - cfg.thermal_decay, static_cast<double>(k));
    TwoPlayerPolicy inner = outer;
    Eigen::VectorXd avg_agent = outer.agent.values();
    Eigen::VectorXd avg_adv = outer.adversary.values();
    for (std::size_t n = 0; n < cfg.inner_steps && updates < cfg.total_steps; ++n, ++updates) {
      const auto trajs = collect(cfg.trajectories_per_step, env, inner, rng);
      const auto g = vpg_gradients(trajs, inner, cfg);
      sgld_update(inner.agent.values(), g.agent, m, cfg.learning_rate, sigma, Direction::Ascend, rng.langevin);
      avg_agent = damped_average(avg_agent, inner.agent.values(), beta);
      if (adversary_active) {
        sgld_update(inner.adversary.values(), g.adversary, m_adv, cfg.learning_rate, sigma, Direction::Descend,
                    rng.langevin);
        avg_adv = damped_average(avg_adv, inner.adversary.values(), beta);
      }
      result.record.rows.push_back({updates, mean_discounted_return(trajs, cfg.discount), std::nullopt, sigma,
                                    cfg.inner_steps});
    }
    outer.agent.values() = damped_average(outer.agent.values(), avg_agent, beta);
    if (adversary_active) outer.adversary.values() = damped_average(outer.adversary.values(), avg_adv, beta);
  }
  return result;
}

VpgResult vpg_gad_train(const ToyMdpConfig& env_cfg, const TwoPlayerPolicy& policy,
                        const VpgConfig& cfg, std::uint64_t rng_seed) {
  cfg.validate();
  ToyMdpEnv env(env_cfg);
  Streams rng(rng_seed);

  VpgResult result{policy, {}};
  result.record.seed = rng_seed;
  TwoPlayerPolicy& p = result.policy;
  p.policy_std = cfg.policy_std;
  RmsState m = RmsState::zeros(p.agent.parameter_count(), cfg.rms_decay, cfg.rms_floor);
  RmsState m_adv = RmsState::zeros(p.adversary.parameter_count(), cfg.rms_decay, cfg.rms_floor);

  for (std::size_t k = 0; k < cfg.total_steps; ++k) {
    const auto trajs = collect(cfg.trajectories_per_step, env, p, rng);
    const auto g = vpg_gradients(trajs, p, cfg);
    sgld_update(p.agent.values(), g.agent, m, cfg.learning_rate, 0.0, Direction::Ascend, rng.langevin);
    if (p.mixing.delta != 0.0) {
      sgld_update(p.adversary.values(), g.adversary, m_adv, cfg.learning_rate, 0.0, Direction::Descend,
                  rng.langevin);
    }
    result.record.rows.push_back({k, mean_discounted_return(trajs, cfg.discount), std::nullopt, 0.0, 1});
  }
  return result;
}

}  // namespace mixne
