#include <gtest/gtest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "optcon/error.h"
#include "optcon/integrator.h"

namespace optcon {
namespace {

VectorField Linear(const Eigen::MatrixXd& a) {
  return [a](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) { ds = a * s; };
}

TEST(Rk4, DecayExample) {
  const Eigen::VectorXd s = Eigen::VectorXd::Constant(1, 1.0);
  const Eigen::VectorXd out = Rk4Step(Linear(-Eigen::MatrixXd::Identity(1, 1)), 0, s, 0.1);
  const double h = 0.1;
  EXPECT_NEAR(out(0), 1 - h + h * h / 2 - h * h * h / 6 + h * h * h * h / 24, 1e-15);
  EXPECT_NEAR(out(0), 0.90483750, 1e-8);
}

TEST(Rk4, ZeroFieldKeepsState) {
  const VectorField zero = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    ds = Eigen::VectorXd::Zero(s.size());
  };
  const Eigen::Vector3d s(1, -2, 3);
  EXPECT_EQ(Rk4Step(zero, 0, s, 0.5), Eigen::VectorXd(s));
}

double MaxErrorOnUnitInterval(const Eigen::MatrixXd& a, const Eigen::VectorXd& s0, int steps) {
  const double h = 1.0 / steps;
  Eigen::VectorXd s = s0;
  double worst = 0;
  for (int k = 1; k <= steps; ++k) {
    s = Rk4Step(Linear(a), (k - 1) * h, s, h);
    const Eigen::MatrixXd phi = (a * (k * h)).exp();
    worst = std::max(worst, (s - phi * s0).cwiseAbs().maxCoeff());
  }
  return worst;
}

TEST(Rk4, FourthOrderConvergence) {
  Eigen::MatrixXd a(3, 3);
  a << -1.0, 2.0, 0.0,
       -2.0, -1.0, 0.5,
        0.0, -0.5, -3.0;
  const Eigen::Vector3d s0(1.0, -0.5, 2.0);
  const double coarse = MaxErrorOnUnitInterval(a, s0, 10);
  const double fine = MaxErrorOnUnitInterval(a, s0, 20);
  const double factor = coarse / fine;
  EXPECT_GE(factor, 12.0);
  EXPECT_LE(factor, 20.0);
}

TEST(Rk4, NonFiniteDerivativeNamesComponent) {
  const VectorField f = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    ds = Eigen::VectorXd::Zero(s.size());
    ds(2) = std::log(-1.0);
  };
  try {
    Rk4Step(f, 0.25, Eigen::Vector3d(0, 0, 0), 0.1);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.component(), 2);
    EXPECT_EQ(e.kind(), ErrorKind::kDivergence);
  }
  EXPECT_THROW(Rk4Step(Linear(Eigen::MatrixXd::Identity(1, 1)), 0, Eigen::VectorXd::Ones(1), 0.0),
               Error);
}

TEST(RefinedRk4, SmoothProblemMatchesTwoHalfSteps) {
  const VectorField f = Linear(-Eigen::MatrixXd::Identity(2, 2));
  const Eigen::Vector2d s(1.0, -2.0);
  RefinementStats stats;
  const Eigen::VectorXd out = RefinedRk4Step(f, 0, s, 1e-3, {}, &stats);
  const Eigen::VectorXd ref = Rk4Step(f, 5e-4, Rk4Step(f, 0, s, 5e-4), 5e-4);
  EXPECT_EQ(out, ref);
  EXPECT_EQ(stats.split_steps, 0);
  EXPECT_EQ(stats.max_depth, 0);
}

TEST(RefinedRk4, StiffDecayStaysBounded) {
  // h * lambda = -50 lies far outside the RK4 stability region.
  const VectorField f = Linear(-5e4 * Eigen::MatrixXd::Identity(1, 1));
  Eigen::VectorXd plain = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd refined = plain;
  RefinementStats stats;
  for (int k = 0; k < 20; ++k) {
    plain = Rk4Step(f, k * 1e-3, plain, 1e-3);
    refined = RefinedRk4Step(f, k * 1e-3, refined, 1e-3, {1e-8, 24}, &stats);
  }
  EXPECT_GT(std::abs(plain(0)), 1e20);
  EXPECT_LE(std::abs(refined(0)), 1e-6);
  EXPECT_GT(stats.split_steps, 0);
}

TEST(RefinedRk4, AccurateAgainstMatrixExponential) {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1.0, -400.0, -1.0;
  const Eigen::Vector2d s0(1.0, 0.0);
  Eigen::VectorXd s = s0;
  const double h = 0.05;
  for (int k = 0; k < 20; ++k) s = RefinedRk4Step(Linear(a), k * h, s, h, {1e-10, 30});
  const Eigen::VectorXd exact = (a * 1.0).exp() * s0;
  EXPECT_LE((s - exact).cwiseAbs().maxCoeff(), 1e-6);
}

}  // namespace
}  // namespace optcon
