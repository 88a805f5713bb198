#include "mixne/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "mixne/rng.hpp"

namespace mixne {

namespace {

void require_same_length(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("parameter layout mismatch");
}

}  // namespace

RmsState RmsState::zeros(std::size_t n, double decay, double floor) {
  if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("RMSProp decay must lie in (0, 1)");
  if (!(floor > 0.0)) throw std::invalid_argument("RMSProp floor must be positive");
  return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), decay, floor};
}

Preconditioned rms_precondition(RmsState& state, const FlatGrad& grad) {
  require_same_length(state.second_moment, grad);
  state.second_moment = state.decay * state.second_moment + (1.0 - state.decay) * grad.cwiseAbs2();
  const Eigen::ArrayXd scale = (state.second_moment.array() + state.floor).sqrt();
  return {(grad.array() / scale).matrix(), scale.sqrt().inverse().matrix()};
}

void langevin_step(Eigen::VectorXd& params, const FlatGrad& scaled_grad,
                   const Eigen::VectorXd& noise_scale, double eta, double sigma,
                   Direction direction, Rng& rng) {
  require_same_length(params, scaled_grad);
  require_same_length(params, noise_scale);
  if (eta < 0.0) throw std::invalid_argument("step size must be non-negative");
  if (sigma < 0.0) throw std::invalid_argument("thermal noise must be non-negative");
  const double sign = direction == Direction::Ascend ? 1.0 : -1.0;
  params += (sign * eta) * scaled_grad;
  if (sigma == 0.0) return;
  const double amplitude = std::sqrt(2.0 * eta) * sigma;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    params[i] += amplitude * noise_scale[i] * rng.normal();
  }
}

void sgld_update(Eigen::VectorXd& params, const FlatGrad& grad, RmsState& state, double eta,
                 double sigma, Direction direction, Rng& rng) {
  const auto pre = rms_precondition(state, grad);
  langevin_step(params, pre.scaled_grad, pre.inv_sqrt_scale, eta, sigma, direction, rng);
}

MlpParams sgld_update(const MlpParams& params, const FlatGrad& grad, RmsState& state,
                      double eta, double sigma, Direction direction, Rng& rng) {
  MlpParams next = params;
  sgld_update(next.values(), grad, state, eta, sigma, direction, rng);
  return next;
}

AdamState AdamState::zeros(std::size_t n, double learning_rate) {
  AdamState s;
  s.first_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  s.second_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  s.learning_rate = learning_rate;
  return s;
}

void adam_update(Eigen::VectorXd& params, const FlatGrad& grad, AdamState& state) {
  require_same_length(params, grad);
  require_same_length(state.first_moment, grad);
  require_same_length(state.second_moment, grad);
  ++state.step_count;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment = state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseAbs2();
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  params.array() -= state.learning_rate * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + state.floor);
}

MlpParams adam_update(const MlpParams& params, const FlatGrad& grad, AdamState& state) {
  MlpParams next = params;
  adam_update(next.values(), grad, state);
  return next;
}

Eigen::VectorXd damped_average(const Eigen::VectorXd& current, const Eigen::VectorXd& incoming,
                               double beta) {
  require_same_length(current, incoming);
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  return (1.0 - beta) * current + beta * incoming;
}

void soft_update(Eigen::VectorXd& target, const Eigen::VectorXd& online, double tau) {
  require_same_length(target, online);
  target = tau * target + (1.0 - tau) * online;
}

}  // namespace mixne
