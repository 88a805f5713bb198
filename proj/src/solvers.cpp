#include "mixne/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "mixne/rng.hpp"

namespace mixne {

namespace {

constexpr double kSingularThreshold = 1e-12;

void append(SolverTrace& trace, const SaddleObjective& obj, const SaddlePoint2D& p) {
  trace.points.push_back(p);
  trace.values.push_back(value(obj, p));
}

void require_positive_step(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("step size must be positive");
}

std::size_t flow_steps(const FlowConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("flow dt must be positive");
  if (cfg.t_end < 0.0) throw std::invalid_argument("flow t_end must be non-negative");
  if (cfg.t_end > 0.0 && cfg.dt > cfg.t_end) {
    throw std::invalid_argument("flow dt must not exceed t_end");
  }
  return static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
}

template <typename Field>
SaddlePoint2D rk4_step(const SaddlePoint2D& p, double h, Field&& field) {
  const auto shifted = [&](const SaddlePoint2D& k, double scale) {
    return SaddlePoint2D{p.theta + scale * k.theta, p.omega + scale * k.omega};
  };
  const SaddlePoint2D k1 = field(p);
  const SaddlePoint2D k2 = field(shifted(k1, 0.5 * h));
  const SaddlePoint2D k3 = field(shifted(k2, 0.5 * h));
  const SaddlePoint2D k4 = field(shifted(k3, h));
  return {p.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
          p.omega + h / 6.0 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega)};
}

template <typename Field>
SolverTrace integrate(const SaddleObjective& obj, const SaddlePoint2D& init,
                      const FlowConfig& cfg, bool projected, Field&& field) {
  const std::size_t steps = flow_steps(cfg);
  SolverTrace trace;
  trace.points.reserve(steps + 1);
  trace.values.reserve(steps + 1);
  SaddlePoint2D p = init;
  append(trace, obj, p);
  for (std::size_t i = 0; i < steps; ++i) {
    p = rk4_step(p, cfg.dt, field);
    if (projected) p = project(p, obj.domain);
    append(trace, obj, p);
  }
  return trace;
}

}  // namespace

LdSchedule LdSchedule::constant(double step_size, double thermal_noise,
                                std::size_t warmup_steps, double damping) {
  return LdSchedule{[step_size](std::size_t) { return step_size; },
                    [thermal_noise](std::size_t) { return thermal_noise; },
                    [warmup_steps](std::size_t) { return warmup_steps; }, damping};
}

void write_trace_csv(const SolverTrace& trace, std::ostream& out) {
  out << "iter,theta,omega,f_value\n";
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", i, trace.points[i].theta,
                       trace.points[i].omega, trace.values[i]);
  }
}

SaddlePoint2D gad_step(const SaddleObjective& obj, const SaddlePoint2D& p, double eta) {
  require_positive_step(eta);
  const auto& box = obj.domain;
  SaddlePoint2D next = p;
  next.theta = std::clamp(p.theta + eta * grad(obj, p).d_theta, box.lo, box.hi);
  next.omega = std::clamp(p.omega - eta * grad(obj, {next.theta, p.omega}).d_omega,
                          box.lo, box.hi);
  return next;
}

SaddlePoint2D eg_step(const SaddleObjective& obj, const SaddlePoint2D& p, double eta) {
  require_positive_step(eta);
  const auto g = grad(obj, p);
  const SaddlePoint2D half =
      project({p.theta + eta * g.d_theta, p.omega - eta * g.d_omega}, obj.domain);
  const auto gh = grad(obj, half);
  return project({p.theta + eta * gh.d_theta, p.omega - eta * gh.d_omega}, obj.domain);
}

SolverTrace gad_run(const SaddleObjective& obj, const SaddlePoint2D& init, double eta,
                    std::size_t iters) {
  SolverTrace trace;
  SaddlePoint2D p = init;
  append(trace, obj, p);
  for (std::size_t t = 0; t < iters; ++t) {
    p = gad_step(obj, p, eta);
    append(trace, obj, p);
  }
  return trace;
}

SolverTrace eg_run(const SaddleObjective& obj, const SaddlePoint2D& init, double eta,
                   std::size_t iters) {
  SolverTrace trace;
  SaddlePoint2D p = init;
  append(trace, obj, p);
  for (std::size_t t = 0; t < iters; ++t) {
    p = eg_step(obj, p, eta);
    append(trace, obj, p);
  }
  return trace;
}

SolverTrace mixed_ne_ld_run(const SaddleObjective& obj, const SaddlePoint2D& init,
                            const LdSchedule& sched, std::size_t outer_iters,
                            std::uint64_t rng_seed) {
  if (!obj.domain.contains(init)) {
    throw std::invalid_argument("initial point lies outside the domain");
  }
  const double beta = sched.damping;
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");

  Rng rng(rng_seed);
  SolverTrace trace;
  trace.seed = rng_seed;
  trace.points.reserve(outer_iters + 1);
  trace.values.reserve(outer_iters + 1);
  const auto& box = obj.domain;

  SaddlePoint2D outer = init;
  append(trace, obj, outer);
  for (std::size_t t = 0; t < outer_iters; ++t) {
    const double eta = sched.step_size(t);
    const double eps = sched.thermal_noise(t);
    const std::size_t inner_steps = sched.warmup_steps(t);
    if (!(eta > 0.0) || eps < 0.0 || inner_steps < 1) {
      throw std::invalid_argument("schedule entry out of range");
    }
    const double noise_scale = eps * std::sqrt(2.0 * eta);

    SaddlePoint2D avg = outer;
    SaddlePoint2D inner = outer;
    for (std::size_t k = 0; k < inner_steps; ++k) {
      const double xi = rng.normal();
      const double xi_prime = rng.normal();
      const double d_theta = grad(obj, {inner.theta, outer.omega}).d_theta;
      const double d_omega = grad(obj, {outer.theta, inner.omega}).d_omega;
      inner.theta = std::clamp(inner.theta + eta * d_theta + noise_scale * xi_prime, box.lo, box.hi);
      inner.omega = std::clamp(inner.omega - eta * d_omega + noise_scale * xi, box.lo, box.hi);
      avg.omega = (1.0 - beta) * avg.omega + beta * inner.omega;
      avg.theta = (1.0 - beta) * avg.theta + beta * inner.theta;
    }
    outer.theta = (1.0 - beta) * outer.theta + beta * avg.theta;
    outer.omega = (1.0 - beta) * outer.omega + beta * avg.omega;
    append(trace, obj, outer);
  }
  return trace;
}

SolverTrace gad_flow(const SaddleObjective& obj, const SaddlePoint2D& init,
                     const FlowConfig& cfg) {
  if (cfg.projected && !obj.domain.contains(init)) {
    throw std::invalid_argument("initial point lies outside the domain");
  }
  const auto& box = obj.domain;
  const bool projected = cfg.projected;
  auto field = [&](const SaddlePoint2D& q) {
    const SaddlePoint2D at = projected ? project(q, box) : q;
    const auto g = grad(obj, at);
    SaddlePoint2D v{g.d_theta, -g.d_omega};
    if (projected) {
      if ((at.theta <= box.lo && v.theta < 0.0) || (at.theta >= box.hi && v.theta > 0.0)) v.theta = 0.0;
      if ((at.omega <= box.lo && v.omega < 0.0) || (at.omega >= box.hi && v.omega > 0.0)) v.omega = 0.0;
    }
    return v;
  };
  return integrate(obj, init, cfg, projected, field);
}

SolverTrace newton_flow(const SaddleObjective& obj, const SaddlePoint2D& init,
                        const FlowConfig& cfg) {
  auto field = [&](const SaddlePoint2D& q) {
    const auto h = hessian_diag(obj, q);
    if (std::abs(h.d_theta_theta) < kSingularThreshold ||
        std::abs(h.d_omega_omega) < kSingularThreshold) {
      throw SingularHessianError(fmt::format(
          "singular diagonal Hessian at ({:.6g}, {:.6g})", q.theta, q.omega));
    }
    const auto g = grad(obj, q);
    return SaddlePoint2D{g.d_theta / h.d_theta_theta, -g.d_omega / h.d_omega_omega};
  };
  return integrate(obj, init, cfg, false, field);
}

double expected_two_step_product(double theta1, double omega1, double eta) {
  if (std::abs(theta1 * omega1 - 0.5) > 1e-12) {
    throw std::invalid_argument("initial point must lie on theta * omega = 0.5");
  }
  const double r2 = theta1 * theta1 + omega1 * omega1;
  return theta1 * omega1 - 4.0 * eta * eta * (eta * r2 + 14.0 * eta * eta);
}

}  // namespace mixne
