#include "mixne/saddle.hpp"

#include <algorithm>
#include <cmath>

namespace mixne {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::TrapA: return "trap_a";
    case ObjectiveKind::TrapB: return "trap_b";
    case ObjectiveKind::Ridge: return "ridge";
  }
  return "unknown";
}

ObjectiveKind objective_kind_from_string(std::string_view name) {
  if (name == "trap_a") return ObjectiveKind::TrapA;
  if (name == "trap_b") return ObjectiveKind::TrapB;
  if (name == "ridge") return ObjectiveKind::Ridge;
  throw std::invalid_argument("unknown objective kind: " + std::string(name));
}

double value(const SaddleObjective& obj, const SaddlePoint2D& p) {
  const double prod = p.theta * p.omega;
  switch (obj.kind) {
    case ObjectiveKind::TrapA: return prod * prod - prod;
    case ObjectiveKind::TrapB: return prod - prod * prod;
    case ObjectiveKind::Ridge: return prod * prod;
  }
  return 0.0;
}

Gradient2D grad(const SaddleObjective& obj, const SaddlePoint2D& p) {
  const double t = p.theta;
  const double w = p.omega;
  switch (obj.kind) {
    case ObjectiveKind::TrapA: return {2.0 * t * w * w - w, 2.0 * t * t * w - t};
    case ObjectiveKind::TrapB: return {w - 2.0 * t * w * w, t - 2.0 * t * t * w};
    case ObjectiveKind::Ridge: return {2.0 * t * w * w, 2.0 * t * t * w};
  }
  return {};
}

HessianDiag2D hessian_diag(const SaddleObjective& obj, const SaddlePoint2D& p) {
  const double tt = 2.0 * p.omega * p.omega;
  const double ww = 2.0 * p.theta * p.theta;
  if (obj.kind == ObjectiveKind::TrapB) return {-tt, -ww};
  return {tt, ww};
}

bool is_stationary(const SaddleObjective& obj, const SaddlePoint2D& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto g = grad(obj, p);
  return std::abs(g.d_theta) <= tol && std::abs(g.d_omega) <= tol;
}

bool is_pure_ne(const SaddleObjective& obj, const SaddlePoint2D& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  bool near_set = false;
  switch (obj.kind) {
    case ObjectiveKind::TrapA:
    case ObjectiveKind::TrapB:
      near_set = std::hypot(p.theta, p.omega) <= tol;
      break;
    case ObjectiveKind::Ridge:
      near_set = std::abs(p.omega) <= tol;
      break;
  }
  return near_set && is_stationary(obj, p, tol);
}

SaddlePoint2D project(const SaddlePoint2D& p, const BoxDomain& box) {
  return {std::clamp(p.theta, box.lo, box.hi), std::clamp(p.omega, box.lo, box.hi)};
}

}  // namespace mixne
