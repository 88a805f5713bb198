#include <cmath>

#include <gtest/gtest.h>

#include "mixne/rng.hpp"
#include "mixne/saddle.hpp"

using namespace mixne;

namespace {

// Closed forms written out independently of the library.
double f_ref(ObjectiveKind k, double t, double w) {
  const double p = t * w;
  switch (k) {
    case ObjectiveKind::TrapA: return p * p - p;
    case ObjectiveKind::TrapB: return p - p * p;
    case ObjectiveKind::Ridge: return p * p;
  }
  return 0.0;
}

const ObjectiveKind kAll[] = {ObjectiveKind::TrapA, ObjectiveKind::TrapB, ObjectiveKind::Ridge};

}  // namespace

TEST(Saddle, ValuesMatchClosedForm) {
  EXPECT_DOUBLE_EQ(value({ObjectiveKind::TrapA, {}}, {1.0, 0.5}), -0.25);
  EXPECT_DOUBLE_EQ(value({ObjectiveKind::TrapB, {}}, {1.0, 0.5}), 0.25);
  EXPECT_DOUBLE_EQ(value({ObjectiveKind::Ridge, {}}, {1.5, -2.0}), 9.0);
  EXPECT_EQ(value({ObjectiveKind::TrapA, {}}, {0.0, 0.0}), 0.0);
}

TEST(Saddle, GradientsMatchCentralDifferences) {
  Rng rng(2);
  for (auto k : kAll) {
    const SaddleObjective obj{k, {}};
    for (int i = 0; i < 200; ++i) {
      const double t = rng.uniform(-2, 2), w = rng.uniform(-2, 2), h = 1e-5;
      const auto g = grad(obj, {t, w});
      EXPECT_NEAR(g.d_theta, (f_ref(k, t + h, w) - f_ref(k, t - h, w)) / (2 * h), 1e-6);
      EXPECT_NEAR(g.d_omega, (f_ref(k, t, w + h) - f_ref(k, t, w - h)) / (2 * h), 1e-6);
      EXPECT_NEAR(value(obj, {t, w}), f_ref(k, t, w), 1e-12);
    }
  }
}

TEST(Saddle, HessianDiagonalMatchesDifferences) {
  Rng rng(4);
  for (auto k : kAll) {
    const SaddleObjective obj{k, {}};
    for (int i = 0; i < 50; ++i) {
      const double t = rng.uniform(-2, 2), w = rng.uniform(-2, 2), h = 1e-4;
      const auto hd = hessian_diag(obj, {t, w});
      const double ftt = (f_ref(k, t + h, w) - 2 * f_ref(k, t, w) + f_ref(k, t - h, w)) / (h * h);
      const double fww = (f_ref(k, t, w + h) - 2 * f_ref(k, t, w) + f_ref(k, t, w - h)) / (h * h);
      EXPECT_NEAR(hd.d_theta_theta, ftt, 1e-5);
      EXPECT_NEAR(hd.d_omega_omega, fww, 1e-5);
    }
  }
}

TEST(Saddle, TrapCurveIsStationaryButNotEquilibrium) {
  for (auto k : {ObjectiveKind::TrapA, ObjectiveKind::TrapB}) {
    const SaddleObjective obj{k, {}};
    for (double t : {0.5, 1.0, 1.5, 2.0}) {
      const SaddlePoint2D p{t, 0.5 / t};
      EXPECT_TRUE(is_stationary(obj, p, 1e-12));
      EXPECT_FALSE(is_pure_ne(obj, p, 1e-6));
    }
    EXPECT_TRUE(is_pure_ne(obj, {0.0, 0.0}, 1e-9));
  }
}

TEST(Saddle, RidgeEquilibriaFillTheAxis) {
  const SaddleObjective obj{ObjectiveKind::Ridge, {}};
  for (double t : {-2.0, -0.3, 0.0, 1.7}) EXPECT_TRUE(is_pure_ne(obj, {t, 0.0}, 1e-9));
  EXPECT_FALSE(is_pure_ne(obj, {1.0, 1.0}, 1e-3));
}

TEST(Saddle, EquilibriumImpliesStationary) {
  Rng rng(9);
  for (auto k : kAll) {
    const SaddleObjective obj{k, {}};
    for (int i = 0; i < 2000; ++i) {
      const SaddlePoint2D p{rng.uniform(-0.05, 0.05) * (k == ObjectiveKind::Ridge ? 40 : 1), rng.uniform(-0.05, 0.05)};
      const double tol = rng.uniform(1e-4, 0.1);
      if (is_pure_ne(obj, p, tol)) {
        EXPECT_TRUE(is_stationary(obj, p, tol));
      }
    }
  }
}

TEST(Saddle, ProjectClampsEachCoordinate) {
  const BoxDomain box;
  EXPECT_EQ(project({3.0, -5.0}, box), (SaddlePoint2D{2.0, -2.0}));
  EXPECT_EQ(project({0.3, -0.4}, box), (SaddlePoint2D{0.3, -0.4}));
  EXPECT_TRUE(box.contains({2.0, -2.0}));
  EXPECT_FALSE(box.contains({2.0000001, 0.0}));
}

TEST(Saddle, InvalidArgumentsThrow) {
  EXPECT_THROW(BoxDomain(1.0, 1.0), std::invalid_argument);
  const SaddleObjective obj{};
  EXPECT_THROW(is_stationary(obj, {0, 0}, 0.0), std::invalid_argument);
  EXPECT_THROW(is_pure_ne(obj, {0, 0}, -1.0), std::invalid_argument);
  EXPECT_THROW(objective_kind_from_string("saddle"), std::invalid_argument);
}

TEST(Saddle, KindNamesRoundTrip) {
  for (auto k : kAll) EXPECT_EQ(objective_kind_from_string(to_string(k)), k);
}
