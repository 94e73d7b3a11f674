#include "optcon/controller.h"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optcon/error.h"

namespace optcon {

ChainDesign HurwitzCoefficients(int n, double pole) {
  if (n < 1) {
    throw Error(ErrorKind::kInvalidParameter,
                "chain length must be >= 1, got " + std::to_string(n));
  }
  if (!(pole > 0.0) || !std::isfinite(pole)) {
    throw Error(ErrorKind::kInvalidParameter, "pole must be positive");
  }
  // (s + pole)^{n-1} = sum_j C(n-1, j-1) pole^{n-j} s^{j-1}, j = 1..n
  const int degree = n - 1;
  ChainDesign d;
  d.k.resize(degree);
  for (int j = 1; j <= degree; ++j) {
    double binom = 1.0;
    for (int t = 1; t <= j - 1; ++t) binom = binom * (degree - t + 1) / t;
    d.k(j - 1) = binom * std::pow(pole, degree - (j - 1));
  }
  return d;
}

double MaxRootRealPart(const ChainDesign& d) {
  const int degree = static_cast<int>(d.k.size());
  if (degree == 0) return -std::numeric_limits<double>::infinity();
  // Companion matrix of s^deg + k_deg s^{deg-1} + ... + k_1.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 0; i + 1 < degree; ++i) c(i, i + 1) = 1.0;
  for (int j = 0; j < degree; ++j) c(degree - 1, j) = -d.k(j);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, false);
  return solver.eigenvalues().real().maxCoeff();
}

bool IsHurwitz(const ChainDesign& d, double margin) {
  return MaxRootRealPart(d) <= -margin;
}

double Zeta(const Eigen::VectorXd& x, double r, const ChainDesign& d) {
  const int n = d.chain_length();
  if (x.size() != n) {
    std::ostringstream msg;
    msg << "chain state has length " << x.size() << ", design expects " << n;
    throw Error(ErrorKind::kShape, msg.str());
  }
  if (n == 1) return x(0) - r;
  double zeta = d.k(0) * (x(0) - r);
  for (int j = 1; j + 1 < n; ++j) zeta += d.k(j) * x(j);
  return zeta + x(n - 1);
}

ErrorCoordinates ComputeErrorCoordinates(const Eigen::VectorXd& x, double r,
                                         const ChainDesign& d) {
  ErrorCoordinates e;
  e.zeta = Zeta(x, r, d);
  e.x_bar = x;
  e.x_bar(0) -= r;
  e.xi = e.x_bar.head(x.size() - 1);
  return e;
}

DesignFunctions MakeDesignExample1() {
  DesignFunctions d;
  d.name = "example1";
  d.kappa = [](double) { return 1.0; };
  d.rho = [](double zeta, double) {
    const double z2 = zeta * zeta;
    return z2 * z2 + 1.0;
  };
  return d;
}

DesignFunctions MakeDesignExample2() {
  DesignFunctions d;
  d.name = "example2";
  d.kappa = [](double r) {
    const double r2 = r * r;
    return r2 * r2 + 1.0;
  };
  d.rho = [](double zeta, double r) {
    const double z2 = zeta * zeta;
    const double r2 = r * r;
    return z2 * z2 + r2 * r2 + 1.0;
  };
  return d;
}

DesignFunctions MakeDesignFromExpressions(const Expression& kappa,
                                          const Expression& rho) {
  if (kappa.DependsOnZeta()) {
    throw Error(ErrorKind::kConfiguration,
                "kappa may depend on r only, got '" + kappa.text() + "'");
  }
  DesignFunctions d;
  d.name = "custom";
  d.kappa = [kappa](double r) { return kappa.Evaluate(0.0, r); };
  d.rho = [rho](double zeta, double r) { return rho.Evaluate(zeta, r); };
  return d;
}

DesignFunctions MakeReducedDesign(const DesignFunctions& base, double b0,
                                  const Expression& gamma,
                                  const Expression& phi1,
                                  const Expression& phi3) {
  if (!(b0 > 0.0)) {
    throw Error(ErrorKind::kConfiguration, "reduced design needs b0 > 0");
  }
  if (phi1.DependsOnZeta()) {
    throw Error(ErrorKind::kConfiguration, "phi1 may depend on r only");
  }
  DesignFunctions d;
  d.name = base.name + "+reduced";
  d.kappa = base.kappa;
  d.rho = [b0, gamma, phi1, phi3](double zeta, double r) {
    return (gamma.Evaluate(zeta, r) + phi1.Evaluate(0.0, r) +
            phi3.Evaluate(zeta, 0.0) + 2.0) /
           (2.0 * b0);
  };
  return d;
}

void ValidateDesign(const DesignFunctions& d, double extent, int points) {
  if (!d.kappa || !d.rho) {
    throw Error(ErrorKind::kConfiguration, "design functions are missing");
  }
  const double step = 2.0 * extent / (points - 1);
  for (int a = 0; a < points; ++a) {
    const double r = -extent + a * step;
    const double kappa = d.kappa(r);
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
      std::ostringstream msg;
      msg << "design '" << d.name << "': kappa(" << r << ") = " << kappa
          << " < 1";
      throw Error(ErrorKind::kConfiguration, msg.str());
    }
    for (int b = 0; b < points; ++b) {
      const double zeta = -extent + b * step;
      const double rho = d.rho(zeta, r);
      if (!(rho >= 1.0) || !std::isfinite(rho)) {
        std::ostringstream msg;
        msg << "design '" << d.name << "': rho(" << zeta << ", " << r
            << ") = " << rho << " < 1";
        throw Error(ErrorKind::kConfiguration, msg.str());
      }
    }
  }
}

namespace {

ControlOutput Compose(const ControllerState& cs, double u, double kappa,
                      double theta_dot,
                      std::span<const NeighborSnapshot> neighbors,
                      const CostFunction& cost, const GeneratorGains& gains) {
  const LocalGeneratorRates gen =
      LocalGeneratorUpdate(cs.r, cs.v, neighbors, cost, gains);
  ControlOutput out;
  out.u = u;
  out.eta_dot = -kappa * cs.eta + u;
  out.theta_dot = theta_dot;
  out.r_dot = gen.r_dot;
  out.v_dot = gen.v_dot;
  return out;
}

}  // namespace

ControlOutput ControlFull(const ControllerState& cs, double zeta,
                          const DesignFunctions& d,
                          std::span<const NeighborSnapshot> neighbors,
                          const CostFunction& cost,
                          const GeneratorGains& gains) {
  const double kappa = d.kappa(cs.r);
  const double rho = d.rho(zeta, cs.r);
  const double u = -cs.theta * rho * zeta + kappa * cs.eta;
  return Compose(cs, u, kappa, rho * zeta * zeta, neighbors, cost, gains);
}

ControlOutput ControlReduced(const ControllerState& cs, double zeta,
                             const DesignFunctions& d,
                             std::span<const NeighborSnapshot> neighbors,
                             const CostFunction& cost,
                             const GeneratorGains& gains) {
  const double kappa = d.kappa(cs.r);
  const double u = -d.rho(zeta, cs.r) * zeta + kappa * cs.eta;
  return Compose(cs, u, kappa, 0.0, neighbors, cost, gains);
}

}  // namespace optcon
