#include "mixne/verify.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mixne/evaluation.hpp"
#include "mixne/mc_kernels.hpp"
#include "mixne/mlp.hpp"
#include "mixne/optim.hpp"
#include "mixne/policy.hpp"
#include "mixne/rng.hpp"
#include "mixne/saddle.hpp"
#include "mixne/solvers.hpp"
#include "mixne/toy_mdp.hpp"

namespace mixne {

namespace {

CheckResult flow_conservation() {
  const SaddleObjective obj{ObjectiveKind::TrapA, {}};
  const SaddlePoint2D init{1.5, 1.5};
  const auto free = gad_flow(obj, init, {10.0, 1e-3, false});
  const double r0 = init.theta * init.theta + init.omega * init.omega;
  double drift = 0.0;
  for (const auto& p : free.points) drift = std::max(drift, std::abs(p.theta * p.theta + p.omega * p.omega - r0));
  const auto boxed = gad_flow(obj, init, {10.0, 1e-3, true});
  const double gap = std::abs(boxed.last().theta * boxed.last().omega - 0.5);
  return {"gad flow: norm conserved, projected flow trapped", drift < 1e-5 && gap < 1e-3,
          fmt::format("max |r^2 - r0^2| = {:.3g}, projected |theta omega - 0.5| = {:.3g}", drift, gap)};
}

CheckResult discrete_trapping() {
  double worst_gap = 0.0;
  double min_dist = 1e300;
  for (auto kind : {ObjectiveKind::TrapA, ObjectiveKind::TrapB}) {
    const SaddleObjective obj{kind, {}};
    for (const auto& tr : {gad_run(obj, {1.5, 1.5}, 0.1, 5000), eg_run(obj, {1.5, 1.5}, 0.1, 5000)}) {
      const auto& p = tr.last();
      worst_gap = std::max(worst_gap, std::abs(p.theta * p.omega - 0.5));
      min_dist = std::min(min_dist, std::hypot(p.theta, p.omega));
    }
  }
  return {"gad/eg trapped on the stationary curve", worst_gap < 0.05 && min_dist > 0.5,
          fmt::format("max |theta omega - 0.5| = {:.3g}, min distance to origin = {:.3g}", worst_gap, min_dist)};
}

CheckResult two_step_identity() {
  bool ok = true;
  std::string detail;
  for (const auto& [t, w] : {std::pair{1.0, 0.5}, std::pair{0.5, 1.0}, std::pair{2.0, 0.25}}) {
    const double exact = expected_two_step_product(t, w, 0.1);
    const auto est = mc_two_step_product(t, w, 0.1, 1'000'000, 7);
    const double z = (est.mean - exact) / est.std_error;
    ok = ok && std::abs(z) < 3.0;
    detail += fmt::format("({}, {}): {:.5f} vs {:.5f} (z = {:.2f}) ", t, w, est.mean, exact, z);
  }
  return {"two-step Langevin product expectation", ok, detail};
}

CheckResult newton_product() {
  const SaddleObjective obj{ObjectiveKind::TrapA, {}};
  double drift = 0.0;
  for (const auto& init : {SaddlePoint2D{1.0, 1.0}, SaddlePoint2D{1.0, 0.5}}) {
    const auto tr = newton_flow(obj, init, {5.0, 1e-3, false});
    for (const auto& p : tr.points) drift = std::max(drift, std::abs(p.theta * p.omega - init.theta * init.omega));
  }
  return {"newton flow conserves theta omega", drift < 1e-5, fmt::format("max drift = {:.3g}", drift)};
}

CheckResult objective_gradients() {
  double worst = 0.0;
  Rng rng(11);
  for (auto kind : {ObjectiveKind::TrapA, ObjectiveKind::TrapB, ObjectiveKind::Ridge}) {
    const SaddleObjective obj{kind, {}};
    for (int i = 0; i < 100; ++i) {
      const SaddlePoint2D p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const double h = 1e-5;
      const auto g = grad(obj, p);
      const double ft = (value(obj, {p.theta + h, p.omega}) - value(obj, {p.theta - h, p.omega})) / (2 * h);
      const double fw = (value(obj, {p.theta, p.omega + h}) - value(obj, {p.theta, p.omega - h})) / (2 * h);
      worst = std::max({worst, std::abs(g.d_theta - ft), std::abs(g.d_omega - fw)});
    }
  }
  return {"objective gradients vs central differences", worst < 1e-6, fmt::format("max abs error = {:.3g}", worst)};
}

CheckResult mlp_gradients() {
  Rng rng(5);
  double worst = 0.0;
  for (auto act : {Activation::Tanh, Activation::Relu}) {
    for (int n = 0; n < 10; ++n) {
      const auto net = MlpParams::random({3, 8, 8, 2}, act, Activation::Tanh, rng);
      Eigen::VectorXd x(3), u(2);
      for (auto& v : x) v = rng.uniform(-1, 1);
      for (auto& v : u) v = rng.uniform(-1, 1);
      const FlatGrad g = mlp_backward(net, {x.data(), 3}, {u.data(), 2});
      MlpParams probe = net;
      const double h = 1e-6;
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double v0 = probe.values()[i];
        probe.values()[i] = v0 + h;
        const double fp = u.dot(mlp_forward(probe, {x.data(), 3}));
        probe.values()[i] = v0 - h;
        const double fm = u.dot(mlp_forward(probe, {x.data(), 3}));
        probe.values()[i] = v0;
        const double fd = (fp - fm) / (2 * h);
        worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
      }
    }
  }
  return {"mlp backprop vs central differences", worst < 1e-4, fmt::format("max rel error = {:.3g}", worst)};
}

CheckResult reductions() {
  Rng rng(3);
  Eigen::VectorXd p(4), g(4);
  p << 0.5, -1.0, 2.0, 0.25;
  g << 1.0, -2.0, 0.5, 3.0;
  Eigen::VectorXd q = p;
  langevin_step(q, g, Eigen::VectorXd::Ones(4), 0.1, 0.0, Direction::Ascend, rng);
  const bool sgld_ok = q == Eigen::VectorXd(p + 0.1 * g);

  const bool mix_ok = mix_actions(0.37, -0.8, MixingConfig{0.0}) == 0.37;

  const SaddleObjective obj{ObjectiveKind::TrapA, {}};
  const SaddlePoint2D init{1.5, 1.5};
  const auto ld = mixed_ne_ld_run(obj, init, LdSchedule::constant(0.1, 0.0, 1, 1.0), 1, 0);
  const auto gr = grad(obj, init);
  const auto expect = project({init.theta + 0.1 * gr.d_theta, init.omega - 0.1 * gr.d_omega}, obj.domain);
  const bool ld_ok = ld.last() == expect;
  return {"noise-free reductions", sgld_ok && mix_ok && ld_ok,
          fmt::format("sgld={} mix={} mixed_ne_ld={}", sgld_ok, mix_ok, ld_ok)};
}

CheckResult constant_state_return() {
  ToyMdpConfig env;
  env.rho = 0.0;
  env.fixed_start = 0.0;
  Rng rng(1);
  auto policy = make_two_player_policy(1, 1, {16, 16}, Activation::Relu, {}, 0.3, rng);
  policy.agent.values().setZero();
  const auto stats = evaluate_policy(policy, env, 3, 9);
  const double exact = reward(0.0) * (1.0 - std::pow(env.discount, static_cast<double>(env.horizon))) /
                       (1.0 - env.discount);
  const double err = std::abs(stats.mean - exact);
  return {"zero policy at s = 0 earns the constant-state return", err < 1e-9,
          fmt::format("{:.6f} vs {:.6f}", stats.mean, exact)};
}

}  // namespace

std::vector<CheckResult> run_verification() {
  return {flow_conservation(), discrete_trapping(), two_step_identity(), newton_product(),
          objective_gradients(), mlp_gradients(), reductions(), constant_state_return()};
}

}  // namespace mixne
