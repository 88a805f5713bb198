#pragma once

// The rho-parametrized one-dimensional MDP used for the robustness study:
// states in [-10, 10], actions in [-1, 1], reward
//   R(s) = sin(sqrt(1.7) s) + cos(sqrt(0.3) s) + 3.
// With probability 1 - rho the executed action is added to the state; with
// probability rho it is replaced by a uniform draw from [-1, 1]. The next
// state is clamped to the state interval and the reward is R(next state).
//
// Random-variate budget: reset draws one uniform (none with a fixed start);
// step draws one uniform for the branch plus one more when the noise branch
// fires.

#include <cstddef>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

namespace mixne {

class Rng;

struct ToyMdpConfig {
  double rho = 0.2;
  double state_lo = -10.0;
  double state_hi = 10.0;
  double action_lo = -1.0;
  double action_hi = 1.0;
  std::size_t horizon = 500;
  double discount = 0.99;
  /// Deterministic initial state; uniform over the state interval when empty.
  std::optional<double> fixed_start;

  void validate() const;
};

struct EnvState {
  double s = 0.0;
  std::size_t t = 0;
};

struct MixingConfig {
  double delta = 0.1;

  void validate() const {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
  }
};

struct StepResult {
  EnvState next;
  double reward = 0.0;
  bool done = false;
};

double reward(double s);

/// (1 - delta) a + delta a_adv. Throws std::invalid_argument when either
/// action is outside [lo, hi].
double mix_actions(double a, double a_adv, const MixingConfig& cfg, double lo = -1.0,
                   double hi = 1.0);

/// Throws std::logic_error when the episode has already finished and
/// std::invalid_argument when a_bar is outside the action bounds.
StepResult step(const EnvState& state, double a_bar, const ToyMdpConfig& cfg, Rng& rng);

EnvState reset(const ToyMdpConfig& cfg, Rng& rng);

/// Bounds of any full-horizon discounted return: rewards lie in [1, 5].
struct ReturnBounds {
  double lo;
  double hi;
};
ReturnBounds return_bounds(const ToyMdpConfig& cfg);

/// Network input for a state: s scaled to [-1, 1].
inline double normalize_state(double s, const ToyMdpConfig& cfg) {
  return 2.0 * (s - cfg.state_lo) / (cfg.state_hi - cfg.state_lo) - 1.0;
}

/// Environment interface the trainers consume: real-vector observations and
/// actions, episodic with a done flag.
class Environment {
 public:
  virtual ~Environment() = default;

  [[nodiscard]] virtual int observation_dim() const = 0;
  [[nodiscard]] virtual int action_dim() const = 0;
  [[nodiscard]] virtual double action_lo() const = 0;
  [[nodiscard]] virtual double action_hi() const = 0;
  [[nodiscard]] virtual double discount() const = 0;

  /// Returns the first observation.
  virtual Eigen::VectorXd reset(Rng& rng) = 0;

  struct Transition {
    Eigen::VectorXd observation;
    double reward = 0.0;
    bool done = false;
  };
  virtual Transition step(const Eigen::VectorXd& action, Rng& rng) = 0;
};

/// ToyMdp behind the generic interface; observations are normalized states.
class ToyMdpEnv final : public Environment {
 public:
  explicit ToyMdpEnv(ToyMdpConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  [[nodiscard]] int observation_dim() const override { return 1; }
  [[nodiscard]] int action_dim() const override { return 1; }
  [[nodiscard]] double action_lo() const override { return cfg_.action_lo; }
  [[nodiscard]] double action_hi() const override { return cfg_.action_hi; }
  [[nodiscard]] double discount() const override { return cfg_.discount; }

  Eigen::VectorXd reset(Rng& rng) override;
  Transition step(const Eigen::VectorXd& action, Rng& rng) override;

  [[nodiscard]] const EnvState& state() const { return state_; }
  [[nodiscard]] const ToyMdpConfig& config() const { return cfg_; }

 private:
  [[nodiscard]] Eigen::VectorXd observe() const;

  ToyMdpConfig cfg_;
  EnvState state_{};
};

}  // namespace mixne
