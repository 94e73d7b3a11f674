#pragma once

#include <functional>

#include <Eigen/Dense>

namespace optcon {

// ds = f(t, s). Implementations write into `ds`, which arrives sized.
using VectorField = std::function<void(double t, const Eigen::VectorXd& s,
                                       Eigen::VectorXd& ds)>;

// Classical fourth-order Runge-Kutta step. Throws DivergenceError naming the
// first non-finite derivative component.
Eigen::VectorXd Rk4Step(const VectorField& f, double t,
                        const Eigen::VectorXd& s, double h);

// Step-doubling control inside one macro step of size h: compare one RK4
// step against two half steps and split recursively while
//   max|full - half| / (1 + max|half|) > tol.
// The macro grid stays fixed, so runs remain deterministic; on smooth
// stretches this costs three RK4 steps and returns the two-half-step value.
struct RefinementConfig {
  double tol = 1e-8;
  int max_depth = 24;
};

struct RefinementStats {
  long long rk4_steps = 0;   // accepted RK4 steps at any level
  long long split_steps = 0; // macro steps that needed at least one split
  int max_depth = 0;
};

Eigen::VectorXd RefinedRk4Step(const VectorField& f, double t,
                               const Eigen::VectorXd& s, double h,
                               const RefinementConfig& cfg,
                               RefinementStats* stats = nullptr);

}  // namespace optcon
