#include "optcon/generator.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "optcon/error.h"

namespace optcon {

GeneratorGains SelectGains(double l_lower, double l_upper, double lambda2,
                           double lambdaN) {
  if (!(lambda2 > 0.0)) {
    std::ostringstream msg;
    msg << "lambda2 = " << lambda2
        << " is not positive; graph lacks a spectral gap";
    throw Error(ErrorKind::kSpectralGap, msg.str());
  }
  if (!(l_lower > 0.0) || !(l_upper >= l_lower) || !(lambdaN >= lambda2)) {
    throw Error(ErrorKind::kInvalidParameter,
                "gain selection needs 0 < l_lower <= l_upper and "
                "0 < lambda2 <= lambdaN");
  }
  GeneratorGains gains;
  gains.alpha = std::max(
      {1.0, 1.0 / l_lower, 2.0 * l_upper * l_upper / (l_lower * lambda2)});
  gains.beta = std::max({1.0, 1.0 / lambda2,
                         6.0 * gains.alpha * gains.alpha * lambdaN * lambdaN /
                             (lambda2 * lambda2)});
  return gains;
}

bool MeetsGainBounds(const GeneratorGains& gains, double l_lower,
                     double l_upper, double lambda2, double lambdaN) {
  if (!(lambda2 > 0.0)) return false;
  const GeneratorGains alpha_bound =
      SelectGains(l_lower, l_upper, lambda2, lambdaN);
  const double beta_bound =
      std::max({1.0, 1.0 / lambda2,
                6.0 * gains.alpha * gains.alpha * lambdaN * lambdaN /
                    (lambda2 * lambda2)});
  constexpr double kSlack = 1e-12;
  return gains.alpha >= alpha_bound.alpha * (1.0 - kSlack) &&
         gains.beta >= beta_bound * (1.0 - kSlack);
}

namespace {

void CheckShapes(const GeneratorState& s, int n) {
  if (s.r.size() != n || s.v.size() != n) {
    std::ostringstream msg;
    msg << "generator state has sizes (" << s.r.size() << ", " << s.v.size()
        << "), expected " << n;
    throw Error(ErrorKind::kShape, msg.str());
  }
}

}  // namespace

LocalGeneratorRates LocalGeneratorUpdate(
    double r, double v, std::span<const NeighborSnapshot> neighbors,
    const CostFunction& cost, const GeneratorGains& gains) {
  double r_diff = 0.0;
  double v_diff = 0.0;
  for (const NeighborSnapshot& nb : neighbors) {
    r_diff += nb.weight * (r - nb.r);
    v_diff += nb.weight * (v - nb.v);
  }
  return {-gains.alpha * cost.Gradient(r) - gains.beta * r_diff - v_diff,
          gains.alpha * gains.beta * r_diff};
}

GeneratorDerivative GeneratorField(const GeneratorState& s,
                                   const CostEnsemble& costs,
                                   const Digraph& g,
                                   const GeneratorGains& gains) {
  const int n = g.size();
  CheckShapes(s, n);
  if (costs.size() != n) {
    throw Error(ErrorKind::kShape, "cost ensemble size differs from graph");
  }
  GeneratorDerivative d{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  std::vector<NeighborSnapshot> snapshot;
  for (int i = 0; i < n; ++i) {
    snapshot.clear();
    for (int j : g.in_neighbors(i)) {
      snapshot.push_back({s.r(j), s.v(j), g.weight(i, j)});
    }
    const LocalGeneratorRates rates =
        LocalGeneratorUpdate(s.r(i), s.v(i), snapshot, costs[i], gains);
    d.r_dot(i) = rates.r_dot;
    d.v_dot(i) = rates.v_dot;
  }
  return d;
}

GeneratorDerivative GeneratorFieldMatrix(const GeneratorState& s,
                                         const CostEnsemble& costs,
                                         const Eigen::MatrixXd& laplacian,
                                         const GeneratorGains& gains) {
  const int n = static_cast<int>(laplacian.rows());
  CheckShapes(s, n);
  if (laplacian.cols() != n || costs.size() != n) {
    throw Error(ErrorKind::kShape, "laplacian/cost dimensions disagree");
  }
  Eigen::VectorXd grad(n);
  for (int i = 0; i < n; ++i) grad(i) = costs[i].Gradient(s.r(i));
  const Eigen::VectorXd lr = laplacian * s.r;
  return {-gains.alpha * grad - gains.beta * lr - laplacian * s.v,
          gains.alpha * gains.beta * lr};
}

GeneratorEquilibrium ComputeEquilibrium(const CostEnsemble& costs,
                                        const Digraph& g, double alpha,
                                        double optimum_tol) {
  const int n = g.size();
  if (costs.size() != n) {
    throw Error(ErrorKind::kShape, "cost ensemble size differs from graph");
  }
  GeneratorEquilibrium eq;
  eq.y_star = GlobalOptimum(costs, optimum_tol);
  eq.r_star = Eigen::VectorXd::Constant(n, eq.y_star);
  eq.v_star = Eigen::VectorXd::Zero(n);
  if (n == 1) return eq;  // no coupling terms; any v is an equilibrium

  Eigen::VectorXd grad(n);
  for (int i = 0; i < n; ++i) grad(i) = costs[i].Gradient(eq.y_star);

  const ComplementBasis basis = MakeComplementBasis(n);
  const Eigen::MatrixXd ml = basis.m2.transpose() * Laplacian(g) * basis.m2;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ml);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kSpectralGap,
                "M2^T L M2 is singular; graph is not strongly connected");
  }
  eq.v_star = -alpha * basis.m2 * lu.solve(basis.m2.transpose() * grad);
  return eq;
}

double LyapunovVo(const GeneratorState& s, const GeneratorEquilibrium& eq,
                  const ComplementBasis& basis, double alpha) {
  const Eigen::VectorXd dr = s.r - eq.r_star;
  const Eigen::VectorXd dv = s.v - eq.v_star;
  const double v1 = basis.m1.dot(dv);
  const Eigen::VectorXd v2 = basis.m2.transpose() * (dv + alpha * dr);
  return dr.squaredNorm() +
         (v1 * v1 + v2.squaredNorm()) / (alpha * alpha * alpha);
}

}  // namespace optcon
