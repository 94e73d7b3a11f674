#pragma once

#include <vector>

#include <Eigen/Dense>

namespace optcon {

// One directed edge j -> i: agent `dst` receives from agent `src`, which sets
// a_{dst,src} = weight. Indices are zero-based here; the scenario format uses
// one-based node labels and converts on load.
struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 1.0;
};

// Weighted digraph stored as its dense adjacency matrix. Row i holds the
// weights of the edges agent i listens to.
class Digraph {
 public:
  // Single isolated node.
  Digraph() : Digraph(Eigen::MatrixXd::Zero(1, 1)) {}

  // Throws Error(kInvalidGraph) on a non-square, nonzero-diagonal, negative or
  // non-finite matrix.
  explicit Digraph(Eigen::MatrixXd weights);

  static Digraph FromEdges(int n, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int i, int j) const { return weights_(i, j); }

  // Nodes j with a_{ij} > 0, ascending.
  const std::vector<int>& in_neighbors(int i) const { return in_neighbors_[i]; }

  double in_degree(int i) const;
  double out_degree(int i) const;

 private:
  Eigen::MatrixXd weights_;
  std::vector<std::vector<int>> in_neighbors_;
};

struct LaplacianReport {
  Eigen::MatrixXd laplacian;
  Eigen::VectorXd sym_eigenvalues;  // of (L + L^T) / 2, ascending
  double lambda2 = 0.0;
  double lambdaN = 0.0;
  bool weight_balanced = false;
  bool strongly_connected = false;
};

// L = D_in - A.
Eigen::MatrixXd Laplacian(const Digraph& g);

// d_in == d_out at every node, within 1e-12 relative to the largest degree.
bool IsWeightBalanced(const Digraph& g);

// Forward and backward reachability from node 0 over edges with a_{ij} > 0.
bool IsStronglyConnected(const Digraph& g);

LaplacianReport BuildLaplacian(const Digraph& g);

// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
// `tol`. Input must be symmetric. Returns eigenvalues in ascending order.
Eigen::VectorXd SymmetricEigenvalues(const Eigen::MatrixXd& a,
                                     double tol = 1e-12);

// Orthonormal split of R^N into span{1} and its complement.
struct ComplementBasis {
  Eigen::VectorXd m1;  // 1/sqrt(N) * 1
  Eigen::MatrixXd m2;  // N x (N-1), columns orthonormal and orthogonal to m1
};

// Householder reflection mapping e_1 to m1; its remaining columns form m2.
// Throws Error(kInvalidDimension) for n < 2.
ComplementBasis MakeComplementBasis(int n);

}  // namespace optcon
