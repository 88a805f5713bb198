#include "mixne/policy.hpp"

#include <stdexcept>

#include "mixne/rng.hpp"

namespace mixne {

TwoPlayerPolicy make_two_player_policy(int obs_dim, int action_dim, const std::vector<int>& hidden,
                                       Activation hidden_activation, MixingConfig mixing,
                                       double policy_std, Rng& rng) {
  mixing.validate();
  if (policy_std < 0.0) throw std::invalid_argument("policy std must be non-negative");
  std::vector<int> sizes{obs_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  TwoPlayerPolicy p;
  p.agent = MlpParams::random(sizes, hidden_activation, Activation::Tanh, rng);
  p.adversary = MlpParams::random(sizes, hidden_activation, Activation::Tanh, rng);
  p.mixing = mixing;
  p.policy_std = policy_std;
  return p;
}

ActionSample sample_action(const MlpParams& net, const Eigen::VectorXd& observation, double std,
                           Rng& rng, double lo, double hi) {
  if (std < 0.0) throw std::invalid_argument("policy std must be non-negative");
  ActionSample out;
  out.mean = mlp_forward(net, {observation.data(), static_cast<std::size_t>(observation.size())});
  out.raw = out.mean;
  if (std > 0.0) {
    for (Eigen::Index i = 0; i < out.raw.size(); ++i) out.raw[i] += std * rng.normal();
  }
  out.action = out.raw.cwiseMax(lo).cwiseMin(hi);
  return out;
}

Eigen::VectorXd gaussian_score(const Eigen::VectorXd& raw, const Eigen::VectorXd& mean, double std) {
  if (!(std > 0.0)) throw std::invalid_argument("score requires a positive policy std");
  return (raw - mean) / (std * std);
}

}  // namespace mixne
