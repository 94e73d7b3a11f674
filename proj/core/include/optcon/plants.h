#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace optcon {

// Normal-form agent: m-dimensional zero dynamics feeding a chain of n
// integrators,
//   z_dot = h(z, y, w)
//   x_dot = A x + B [g(z, x, w) + b(w) u],   y = x_1
// with h(0, 0, w) = 0, g(0, 0, w) = 0 and b(w) >= b0 > 0.
struct Plant {
  std::string type;
  int n = 1;
  int m = 0;
  int w_dim = 0;
  double b0 = 1.0;

  std::function<Eigen::VectorXd(const Eigen::VectorXd& z, double y,
                                const Eigen::VectorXd& w)>
      h;
  std::function<double(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& w)>
      g;
  std::function<double(const Eigen::VectorXd& w)> b;

  // Zero-dynamics steady state z*(s, w) with h(z*(s, w), s, w) = 0.
  std::function<Eigen::VectorXd(double s, const Eigen::VectorXd& w)> z_star;
};

struct AgentState {
  Eigen::VectorXd z;
  Eigen::VectorXd x;

  double y() const { return x(0); }
};

struct PlantDerivative {
  Eigen::VectorXd z_dot;
  Eigen::VectorXd x_dot;
};

PlantDerivative PlantField(const Plant& p, const AgentState& s, double u,
                           const Eigen::VectorXd& w);

// Feedforward that holds the agent at y = s: u*(s, w) = -g(z*, x*, w) / b(w)
// with x* = (s, 0, ..., 0). Needs the true w, so only test oracles and
// reports call it.
double SteadyStateInput(const Plant& p, double s, const Eigen::VectorXd& w);

// Flexible-joint single-link manipulator in chain coordinates
// x = (q1, q1', q1'', q1'''). w = (w1, w2) scales mass and length:
// M = (1 + w1) M0, L = (1 + w2) L0.
struct ManipulatorParams {
  double j1 = 1.0;
  double j2 = 1.0;
  double m0 = 1.0;
  double l0 = 1.0;
  double k = 1.0;
  double grav = 9.8;
};

Plant MakeManipulator(const ManipulatorParams& params);

// Chain state from physical joint data (q1, q1', q2, q2') using the link
// equation J1 q1'' + M g L sin q1 + k (q1 - q2) = 0 and its derivative.
Eigen::VectorXd ManipulatorChainState(const ManipulatorParams& params,
                                      const Eigen::VectorXd& w, double q1,
                                      double dq1, double q2, double dq2);

// Controlled FitzHugh-Nagumo cell, n = 1, m = 1, w = (w3, w4, w5, w6):
//   z_dot = -(1 + w3) c z + (1 - w4) b y
//   x_dot = (1 + w6) x (a - x)(x - 1) - z + (1 + w5) u
// `b0` is the declared lower bound on 1 + w5.
Plant MakeFitzHughNagumo(double a, double b, double c, double b0 = 1.0);

// Controlled Van der Pol oscillator, n = 2, m = 0, w = (w3, w4, w5):
//   x2_dot = -(1 + w3) x1 + (1 + w4)(1 - x1^2) x2 + (1 + w5) u
Plant MakeVanDerPol(double b0 = 1.0);

// Pure chain of n integrators: g = 0, b = 1.
Plant MakeIntegratorChain(int n);

// Box W = [lower, upper] containing the origin; components flagged in
// `nonnegative` are drawn from [max(0, lower), upper].
struct UncertaintySpec {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<bool> nonnegative;

  int dim() const { return static_cast<int>(lower.size()); }
  void Validate() const;
};

Eigen::VectorXd SampleUncertainty(const UncertaintySpec& spec,
                                  std::uint64_t seed);

}  // namespace optcon
