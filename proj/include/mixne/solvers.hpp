#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "mixne/saddle.hpp"

namespace mixne {

/// Per-outer-iteration schedules for the Langevin solver, indexed from t = 0.
struct LdSchedule {
  std::function<double(std::size_t)> step_size;
  std::function<double(std::size_t)> thermal_noise;
  std::function<std::size_t(std::size_t)> warmup_steps;
  double damping = 0.5;

  static LdSchedule constant(double step_size, double thermal_noise,
                             std::size_t warmup_steps, double damping);
};

/// One entry per recorded iterate; entry 0 is the initial point.
struct SolverTrace {
  std::vector<SaddlePoint2D> points;
  std::vector<double> values;
  std::uint64_t seed = 0;

  [[nodiscard]] const SaddlePoint2D& last() const { return points.back(); }
};

/// Writes `iter,theta,omega,f_value` rows with round-trip precision.
void write_trace_csv(const SolverTrace& trace, std::ostream& out);

struct FlowConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  /// Zero outward velocity components on the box boundary. When false the
  /// flow runs on the whole plane.
  bool projected = true;
};

class SingularHessianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sequential projected gradient ascent-descent: theta moves first and the
/// omega step reads the updated theta.
SaddlePoint2D gad_step(const SaddleObjective& obj, const SaddlePoint2D& p, double eta);

/// Projected extra-gradient: an extrapolation half-step from p, then a full
/// step from p using the gradient at the half-point.
SaddlePoint2D eg_step(const SaddleObjective& obj, const SaddlePoint2D& p, double eta);

SolverTrace gad_run(const SaddleObjective& obj, const SaddlePoint2D& init, double eta,
                    std::size_t iters);
SolverTrace eg_run(const SaddleObjective& obj, const SaddlePoint2D& init, double eta,
                   std::size_t iters);

/// Nested Langevin sampler for mixed equilibria.
///
/// Each outer iteration runs K_t projected Langevin steps per player with the
/// opponent frozen at its outer value, keeps damped running averages of the
/// inner iterates, and commits (1 - beta) * outer + beta * average. Records
/// outer iterates only. Throws std::invalid_argument if init is outside the
/// objective's domain or a schedule entry is out of range.
SolverTrace mixed_ne_ld_run(const SaddleObjective& obj, const SaddlePoint2D& init,
                            const LdSchedule& sched, std::size_t outer_iters,
                            std::uint64_t rng_seed);

/// RK4 integration of d(theta)/dt = df/dtheta, d(omega)/dt = -df/domega.
/// Records every integration step.
SolverTrace gad_flow(const SaddleObjective& obj, const SaddlePoint2D& init,
                     const FlowConfig& cfg);

/// RK4 integration of the flow above preconditioned by the inverse diagonal
/// Hessian. Runs on the whole plane (cfg.projected is ignored). Throws
/// SingularHessianError when either diagonal entry drops below 1e-12 in
/// magnitude at any stage evaluation.
SolverTrace newton_flow(const SaddleObjective& obj, const SaddlePoint2D& init,
                        const FlowConfig& cfg);

/// Closed-form E[theta_3 * omega_3] of the unprojected two-step Langevin
/// process started on the stationary curve theta * omega = 1/2 of TrapA:
///   theta_1 omega_1 - 4 eta^2 (eta (theta_1^2 + omega_1^2) + 14 eta^2).
/// Throws std::invalid_argument when |theta_1 omega_1 - 1/2| > 1e-12.
double expected_two_step_product(double theta1, double omega1, double eta);

}  // namespace mixne
