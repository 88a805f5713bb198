#pragma once

// Closed-form two-player polynomial games on a box. The first player (theta)
// maximizes, the second (omega) minimizes.
//
//   TrapA: f = theta^2 omega^2 - theta omega   (NE at the origin; the curve
//          theta * omega = 1/2 is stationary but not an equilibrium)
//   TrapB: f = theta omega - theta^2 omega^2   (same NE and trap curve)
//   Ridge: f = theta^2 omega^2                 (every (theta, 0) is an NE)

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixne {

struct SaddlePoint2D {
  double theta = 0.0;
  double omega = 0.0;

  friend bool operator==(const SaddlePoint2D&, const SaddlePoint2D&) = default;
};

/// Shared per-coordinate bounds [lo, hi].
struct BoxDomain {
  double lo = -2.0;
  double hi = 2.0;

  BoxDomain() = default;
  BoxDomain(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi)) throw std::invalid_argument("BoxDomain requires lo < hi");
  }

  [[nodiscard]] bool contains(const SaddlePoint2D& p) const {
    return p.theta >= lo && p.theta <= hi && p.omega >= lo && p.omega <= hi;
  }
};

enum class ObjectiveKind { TrapA, TrapB, Ridge };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(std::string_view name);

struct SaddleObjective {
  ObjectiveKind kind = ObjectiveKind::TrapA;
  BoxDomain domain{};
};

/// Partial derivatives (df/dtheta, df/domega), unsigned.
struct Gradient2D {
  double d_theta = 0.0;
  double d_omega = 0.0;
};

/// Diagonal of the Hessian: (d2f/dtheta2, d2f/domega2).
struct HessianDiag2D {
  double d_theta_theta = 0.0;
  double d_omega_omega = 0.0;
};

double value(const SaddleObjective& obj, const SaddlePoint2D& p);
Gradient2D grad(const SaddleObjective& obj, const SaddlePoint2D& p);
HessianDiag2D hessian_diag(const SaddleObjective& obj, const SaddlePoint2D& p);

/// Both partials have magnitude <= tol.
bool is_stationary(const SaddleObjective& obj, const SaddlePoint2D& p, double tol);

/// Membership in the known pure-NE set of the objective, to within tol
/// (origin for TrapA/TrapB, the omega = 0 line for Ridge), combined with
/// stationarity at the same tolerance.
bool is_pure_ne(const SaddleObjective& obj, const SaddlePoint2D& p, double tol);

/// Coordinatewise clamp into the box.
SaddlePoint2D project(const SaddlePoint2D& p, const BoxDomain& box);

}  // namespace mixne
