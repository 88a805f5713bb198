#include "mixne/evaluation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixne/rng.hpp"
#include "mixne/vpg.hpp"

namespace mixne {

namespace {

double random_episode_return(const ToyMdpConfig& env_cfg, std::uint64_t episode_seed) {
  ToyMdpEnv env(env_cfg);
  Rng rng(episode_seed);
  env.reset(rng);
  std::vector<double> rewards;
  rewards.reserve(env_cfg.horizon);
  Eigen::VectorXd a(1);
  for (;;) {
    a[0] = rng.uniform(env_cfg.action_lo, env_cfg.action_hi);
    const auto tr = env.step(a, rng);
    rewards.push_back(tr.reward);
    if (tr.done) break;
  }
  return discounted_return(rewards, env_cfg.discount);
}

void check_episodes(std::size_t episodes) {
  if (episodes == 0) throw std::invalid_argument("evaluation needs at least one episode");
}

}  // namespace

ReturnStats summarize_returns(const double* returns, std::size_t n) {
  if (n == 0) throw std::invalid_argument("summarize_returns needs at least one return");
  ReturnStats s;
  s.episodes = n;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += returns[i];
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (returns[i] - s.mean) * (returns[i] - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

double agent_episode_return(const MlpParams& agent, const ToyMdpConfig& env_cfg, std::uint64_t episode_seed) {
  ToyMdpEnv env(env_cfg);
  Rng rng(episode_seed);
  Eigen::VectorXd obs = env.reset(rng);
  std::vector<double> rewards;
  rewards.reserve(env_cfg.horizon);
  for (;;) {
    const auto s = sample_action(agent, obs, 0.0, rng, env_cfg.action_lo, env_cfg.action_hi);
    auto tr = env.step(s.action, rng);
    rewards.push_back(tr.reward);
    if (tr.done) break;
    obs = std::move(tr.observation);
  }
  return discounted_return(rewards, env_cfg.discount);
}

ReturnStats evaluate_policy(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg, std::size_t episodes,
                            std::uint64_t rng_seed) {
  check_episodes(episodes);
  env_cfg.validate();
  std::vector<double> returns(episodes);
  const auto n = static_cast<long long>(episodes);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    returns[static_cast<std::size_t>(i)] =
        agent_episode_return(policy.agent, env_cfg, derive_seed(rng_seed, static_cast<std::uint64_t>(i)));
  }
  return summarize_returns(returns.data(), returns.size());
}

ReturnStats evaluate_policy_serial(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg,
                                   std::size_t episodes, std::uint64_t rng_seed) {
  check_episodes(episodes);
  env_cfg.validate();
  std::vector<double> returns(episodes);
  for (std::size_t i = 0; i < episodes; ++i) {
    returns[i] = agent_episode_return(policy.agent, env_cfg, derive_seed(rng_seed, i));
  }
  return summarize_returns(returns.data(), returns.size());
}

ReturnStats evaluate_random_policy(const ToyMdpConfig& env_cfg, std::size_t episodes, std::uint64_t rng_seed) {
  check_episodes(episodes);
  env_cfg.validate();
  std::vector<double> returns(episodes);
  const auto n = static_cast<long long>(episodes);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    returns[static_cast<std::size_t>(i)] =
        random_episode_return(env_cfg, derive_seed(rng_seed, static_cast<std::uint64_t>(i)));
  }
  return summarize_returns(returns.data(), returns.size());
}

}  // namespace mixne
