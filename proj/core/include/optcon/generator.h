#pragma once

#include <span>

#include <Eigen/Dense>

#include "optcon/costs.h"
#include "optcon/graph.h"

namespace optcon {

struct GeneratorGains {
  double alpha = 1.0;
  double beta = 1.0;
};

// Smallest gains for which the generator's convergence argument goes through:
//   alpha >= max{1, 1/l, 2 lu^2 / (l lambda2)}
//   beta  >= max{1, 1/lambda2, 6 alpha^2 lambdaN^2 / lambda2^2}
// with l = l_lower, lu = l_upper. Returns the bounds themselves.
GeneratorGains SelectGains(double l_lower, double l_upper, double lambda2,
                           double lambdaN);

// True when `gains` meet the bounds above (1e-12 relative slack).
bool MeetsGainBounds(const GeneratorGains& gains, double l_lower,
                     double l_upper, double lambda2, double lambdaN);

// r: local estimates of y*, v: integral (dual) states.
struct GeneratorState {
  Eigen::VectorXd r;
  Eigen::VectorXd v;
};

struct GeneratorDerivative {
  Eigen::VectorXd r_dot;
  Eigen::VectorXd v_dot;
};

// What agent i sees of neighbor j: its (r_j, v_j) and the weight a_ij.
struct NeighborSnapshot {
  double r = 0.0;
  double v = 0.0;
  double weight = 0.0;
};

struct LocalGeneratorRates {
  double r_dot = 0.0;
  double v_dot = 0.0;
};

// One agent's generator update from its own (r, v), its cost and neighbor
// snapshots only.
LocalGeneratorRates LocalGeneratorUpdate(
    double r, double v, std::span<const NeighborSnapshot> neighbors,
    const CostFunction& cost, const GeneratorGains& gains);

// Agent-local evaluation with neighbor sums:
//   r_dot_i = -alpha grad f_i(r_i) - beta sum_j a_ij (r_i - r_j)
//             - sum_j a_ij (v_i - v_j)
//   v_dot_i = alpha beta sum_j a_ij (r_i - r_j)
GeneratorDerivative GeneratorField(const GeneratorState& s,
                                   const CostEnsemble& costs,
                                   const Digraph& g,
                                   const GeneratorGains& gains);

// Same field in stacked form, r_dot = -alpha grad F(r) - beta L r - L v,
// v_dot = alpha beta L r.
GeneratorDerivative GeneratorFieldMatrix(const GeneratorState& s,
                                         const CostEnsemble& costs,
                                         const Eigen::MatrixXd& laplacian,
                                         const GeneratorGains& gains);

struct GeneratorEquilibrium {
  Eigen::VectorXd r_star;
  Eigen::VectorXd v_star;
  double y_star = 0.0;
};

// r* = 1 y*, v* = -alpha M2 (M2^T L M2)^{-1} M2^T grad F(r*). Requires a
// weight-balanced, strongly connected graph; throws Error(kSpectralGap) when
// M2^T L M2 is singular.
GeneratorEquilibrium ComputeEquilibrium(const CostEnsemble& costs,
                                        const Digraph& g, double alpha,
                                        double optimum_tol = 1e-10);

// V_o = |r_bar|^2 + (|v1_bar|^2 + |v2_bar|^2) / alpha^3 with
// r_bar = r - r*, v1_bar = M1^T (v - v*),
// v2_bar = M2^T ((v + alpha r) - (v* + alpha r*)).
double LyapunovVo(const GeneratorState& s, const GeneratorEquilibrium& eq,
                  const ComplementBasis& basis, double alpha);

}  // namespace optcon
