#pragma once

// Agent-only evaluation on the toy MDP: the adversary is switched off
// (delta = 0) and the agent's mean action is executed. Episodes run in
// parallel; episode i draws from its own stream derive_seed(seed, i), so the
// result does not depend on the thread count and matches the serial
// reference bit for bit.

#include <cstddef>
#include <cstdint>

#include "mixne/policy.hpp"
#include "mixne/toy_mdp.hpp"

namespace mixne {

struct ReturnStats {
  double mean = 0.0;
  double std = 0.0;        ///< sample std (n - 1); 0 for a single episode
  std::size_t episodes = 0;

  friend bool operator==(const ReturnStats&, const ReturnStats&) = default;
};

/// env_cfg.rho selects the evaluation environment. Throws on episodes == 0.
ReturnStats evaluate_policy(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg, std::size_t episodes,
                            std::uint64_t rng_seed);
ReturnStats evaluate_policy_serial(const TwoPlayerPolicy& policy, const ToyMdpConfig& env_cfg,
                                   std::size_t episodes, std::uint64_t rng_seed);

/// Discounted return of a single agent-only episode.
double agent_episode_return(const MlpParams& agent, const ToyMdpConfig& env_cfg, std::uint64_t episode_seed);

/// Baseline: actions uniform on the action interval.
ReturnStats evaluate_random_policy(const ToyMdpConfig& env_cfg, std::size_t episodes, std::uint64_t rng_seed);

ReturnStats summarize_returns(const double* returns, std::size_t n);

}  // namespace mixne
