#pragma once

#include <functional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "optcon/costs.h"
#include "optcon/expression.h"
#include "optcon/generator.h"

namespace optcon {

// Coefficients k_1..k_{n-1} of p(s) = sum_j k_j s^{j-1} + s^{n-1}. Empty for
// n = 1, where the chain part of the error system vanishes.
struct ChainDesign {
  Eigen::VectorXd k;

  int chain_length() const { return static_cast<int>(k.size()) + 1; }
};

// k from (s + pole)^{n-1} without its leading 1, e.g. n = 4, pole = 1 gives
// (1, 3, 3).
ChainDesign HurwitzCoefficients(int n, double pole = 1.0);

// Largest real part among the roots of p; -inf when p is constant (n <= 1).
double MaxRootRealPart(const ChainDesign& d);

bool IsHurwitz(const ChainDesign& d, double margin = 1e-6);

struct ErrorCoordinates {
  Eigen::VectorXd x_bar;  // x - (r, 0, ..., 0)
  Eigen::VectorXd xi;     // first n-1 entries of x_bar
  double zeta = 0.0;      // sum_j k_j x_bar_j + x_bar_n
};

ErrorCoordinates ComputeErrorCoordinates(const Eigen::VectorXd& x, double r,
                                         const ChainDesign& d);

// Just the scalar zeta, allocation free.
double Zeta(const Eigen::VectorXd& x, double r, const ChainDesign& d);

// kappa(r) scales the compensator, rho(zeta, r) the stabilizing feedback;
// the adaptation rate is always tau = rho * zeta^2.
struct DesignFunctions {
  std::string name;
  std::function<double(double r)> kappa;
  std::function<double(double zeta, double r)> rho;

  double tau(double zeta, double r) const {
    return rho(zeta, r) * zeta * zeta;
  }
};

// kappa = 1, rho = zeta^4 + 1
DesignFunctions MakeDesignExample1();
// kappa = r^4 + 1, rho = zeta^4 + r^4 + 1
DesignFunctions MakeDesignExample2();
// User supplied polynomials; `kappa` may only depend on r.
DesignFunctions MakeDesignFromExpressions(const Expression& kappa,
                                          const Expression& rho);

// Reduced (non-adaptive) feedback gain
//   rho = (gamma(zeta, r) + phi1(r) + phi3(zeta) + 2) / (2 b0)
// built from declared bound functions and the input-gain bound b0.
DesignFunctions MakeReducedDesign(const DesignFunctions& base, double b0,
                                  const Expression& gamma,
                                  const Expression& phi1,
                                  const Expression& phi3);

// Checks kappa >= 1 and rho >= 1 on a grid over [-extent, extent]^2; throws
// Error(kConfiguration) naming the first violating point.
void ValidateDesign(const DesignFunctions& d, double extent = 10.0,
                    int points = 41);

struct ControllerState {
  double eta = 0.0;
  double theta = 0.0;
  double r = 0.0;
  double v = 0.0;
};

struct ControlOutput {
  double u = 0.0;
  double eta_dot = 0.0;
  double theta_dot = 0.0;
  double r_dot = 0.0;
  double v_dot = 0.0;
};

// Adaptive law:
//   u = -theta rho(zeta, r) zeta + kappa(r) eta
//   eta_dot = -kappa(r) eta + u,  theta_dot = tau(zeta, r)
// plus the embedded generator update for (r, v).
ControlOutput ControlFull(const ControllerState& cs, double zeta,
                          const DesignFunctions& d,
                          std::span<const NeighborSnapshot> neighbors,
                          const CostFunction& cost,
                          const GeneratorGains& gains);

// Same without adaptation: u = -rho(zeta, r) zeta + kappa(r) eta, and
// theta_dot = 0.
ControlOutput ControlReduced(const ControllerState& cs, double zeta,
                             const DesignFunctions& d,
                             std::span<const NeighborSnapshot> neighbors,
                             const CostFunction& cost,
                             const GeneratorGains& gains);

}  // namespace optcon
