#include "mixne/toy_mdp.hpp"

#include <algorithm>
#include <cmath>

#include "mixne/rng.hpp"

namespace mixne {

void ToyMdpConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (!(state_lo < state_hi)) throw std::invalid_argument("state_lo must be below state_hi");
  if (!(action_lo < action_hi)) throw std::invalid_argument("action_lo must be below action_hi");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");
  if (fixed_start && (*fixed_start < state_lo || *fixed_start > state_hi)) {
    throw std::invalid_argument("fixed start outside the state interval");
  }
}

double reward(double s) {
  return std::sin(std::sqrt(1.7) * s) + std::cos(std::sqrt(0.3) * s) + 3.0;
}

double mix_actions(double a, double a_adv, const MixingConfig& cfg, double lo, double hi) {
  cfg.validate();
  if (a < lo || a > hi || a_adv < lo || a_adv > hi) {
    throw std::invalid_argument("action outside the action bounds");
  }
  return (1.0 - cfg.delta) * a + cfg.delta * a_adv;
}

StepResult step(const EnvState& state, double a_bar, const ToyMdpConfig& cfg, Rng& rng) {
  if (state.t >= cfg.horizon) throw std::logic_error("stepping a finished episode");
  if (a_bar < cfg.action_lo || a_bar > cfg.action_hi) {
    throw std::invalid_argument("action outside the action bounds");
  }
  double increment = a_bar;
  if (rng.uniform() < cfg.rho) increment = rng.uniform(cfg.action_lo, cfg.action_hi);
  StepResult out;
  out.next.s = std::clamp(state.s + increment, cfg.state_lo, cfg.state_hi);
  out.next.t = state.t + 1;
  out.reward = reward(out.next.s);
  out.done = out.next.t == cfg.horizon;
  return out;
}

EnvState reset(const ToyMdpConfig& cfg, Rng& rng) {
  if (cfg.fixed_start) return {*cfg.fixed_start, 0};
  return {rng.uniform(cfg.state_lo, cfg.state_hi), 0};
}

ReturnBounds return_bounds(const ToyMdpConfig& cfg) {
  const double g = cfg.discount;
  const double geometric = (1.0 - std::pow(g, static_cast<double>(cfg.horizon))) / (1.0 - g);
  return {1.0 * geometric, 5.0 * geometric};
}

Eigen::VectorXd ToyMdpEnv::observe() const {
  Eigen::VectorXd obs(1);
  obs[0] = normalize_state(state_.s, cfg_);
  return obs;
}

Eigen::VectorXd ToyMdpEnv::reset(Rng& rng) {
  state_ = mixne::reset(cfg_, rng);
  return observe();
}

Environment::Transition ToyMdpEnv::step(const Eigen::VectorXd& action, Rng& rng) {
  const auto r = mixne::step(state_, action[0], cfg_, rng);
  state_ = r.next;
  return {observe(), r.reward, r.done};
}

}  // namespace mixne
