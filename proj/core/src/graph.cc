#include "optcon/graph.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optcon/error.h"

namespace optcon {

Digraph::Digraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols() || weights_.rows() == 0) {
    std::ostringstream msg;
    msg << "adjacency must be square and nonempty, got " << weights_.rows()
        << "x" << weights_.cols();
    throw Error(ErrorKind::kInvalidGraph, msg.str());
  }
  const int n = size();
  in_neighbors_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = weights_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        std::ostringstream msg;
        msg << "weight a(" << i << "," << j << ") = " << a
            << " must be finite and nonnegative";
        throw Error(ErrorKind::kInvalidGraph, msg.str());
      }
      if (i == j && a != 0.0) {
        throw Error(ErrorKind::kInvalidGraph,
                    "self-loop at node " + std::to_string(i));
      }
      if (a > 0.0) in_neighbors_[i].push_back(j);
    }
  }
}

Digraph Digraph::FromEdges(int n, const std::vector<Edge>& edges) {
  if (n < 1) throw Error(ErrorKind::kInvalidGraph, "graph needs n >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      std::ostringstream msg;
      msg << "edge (" << e.src << " -> " << e.dst << ") out of range for n="
          << n;
      throw Error(ErrorKind::kInvalidGraph, msg.str());
    }
    a(e.dst, e.src) = e.weight;
  }
  return Digraph(std::move(a));
}

double Digraph::in_degree(int i) const { return weights_.row(i).sum(); }

double Digraph::out_degree(int i) const { return weights_.col(i).sum(); }

Eigen::MatrixXd Laplacian(const Digraph& g) {
  const Eigen::MatrixXd& a = g.weights();
  Eigen::MatrixXd lap = -a;
  for (int i = 0; i < g.size(); ++i) {
    // Off-diagonal sum of the row, so that L * 1 cancels term by term.
    double d = 0.0;
    for (int j = 0; j < g.size(); ++j) d += a(i, j);
    lap(i, i) = d;
  }
  return lap;
}

bool IsWeightBalanced(const Digraph& g) {
  double max_degree = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    max_degree = std::max({max_degree, g.in_degree(i), g.out_degree(i)});
  }
  const double tol = 1e-12 * std::max(1.0, max_degree);
  for (int i = 0; i < g.size(); ++i) {
    if (std::abs(g.in_degree(i) - g.out_degree(i)) > tol) return false;
  }
  return true;
}

namespace {

// Nodes reachable from `start`. With forward = true we follow information
// flow j -> i (a_{ij} > 0); otherwise the reverse direction.
std::vector<bool> Reachable(const Digraph& g, int start, bool forward) {
  const int n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    for (int other = 0; other < n; ++other) {
      const double a = forward ? g.weight(other, node) : g.weight(node, other);
      if (a > 0.0 && !seen[other]) {
        seen[other] = true;
        stack.push_back(other);
      }
    }
  }
  return seen;
}

}  // namespace

bool IsStronglyConnected(const Digraph& g) {
  const auto fwd = Reachable(g, 0, true);
  const auto bwd = Reachable(g, 0, false);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& input,
                                     double tol) {
  if (input.rows() != input.cols()) {
    throw Error(ErrorKind::kShape, "eigenvalue input must be square");
  }
  Eigen::MatrixXd a = input;
  const int n = static_cast<int>(a.rows());
  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Eigen::VectorXd eig = a.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

LaplacianReport BuildLaplacian(const Digraph& g) {
  LaplacianReport report;
  report.laplacian = Laplacian(g);
  const Eigen::MatrixXd sym =
      0.5 * (report.laplacian + report.laplacian.transpose());
  report.sym_eigenvalues = SymmetricEigenvalues(sym);
  const auto n = report.sym_eigenvalues.size();
  report.lambda2 = n >= 2 ? report.sym_eigenvalues(1) : 0.0;
  report.lambdaN = n >= 2 ? report.sym_eigenvalues(n - 1) : 0.0;
  report.weight_balanced = IsWeightBalanced(g);
  report.strongly_connected = IsStronglyConnected(g);
  return report;
}

ComplementBasis MakeComplementBasis(int n) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidDimension,
                "complement basis needs n >= 2, got " + std::to_string(n));
  }
  ComplementBasis basis;
  basis.m1 = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  // u = e_1 - m1 is never zero for n >= 2, and H = I - 2uu^T/(u^T u) swaps
  // e_1 and m1.
  Eigen::VectorXd u = -basis.m1;
  u(0) += 1.0;
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) -
                            (2.0 / u.squaredNorm()) * (u * u.transpose());
  basis.m2 = h.rightCols(n - 1);
  return basis;
}

}  // namespace optcon
