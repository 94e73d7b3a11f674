#pragma once

#include <optional>
#include <string>
#include <vector>

namespace optcon {

enum class CostKind {
  kQuadratic,
  kExample2F1,
  kExample2F2,
  kExample2F3,
  kExample2F4,
};

struct HessianBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Scalar, strongly convex local cost f_i with an analytic gradient.
class CostFunction {
 public:
  // 1/2 y^2
  CostFunction() : CostFunction(CostKind::kQuadratic, 0.0, 1.0) {}

  // f(y) = weight / 2 * (y - center)^2
  static CostFunction Quadratic(double center, double weight = 1.0);

  // The four heterogeneous costs of the FHN/VdP network, index in 1..4:
  //   f1 = (y-8)^2
  //   f2 = y^2 / (80 ln(y^2+2)) + (y-5)^2
  //   f3 = y^2 / (20 sqrt(y^2+1)) + y^2
  //   f4 = ln(e^{-0.05y} + e^{0.05y}) + y^2
  static CostFunction Example2(int index);

  CostKind kind() const { return kind_; }
  double center() const { return center_; }
  double weight() const { return weight_; }
  std::string name() const;

  double Value(double y) const;
  double Gradient(double y) const;

  const std::optional<HessianBounds>& declared_bounds() const {
    return declared_bounds_;
  }
  CostFunction WithDeclaredBounds(HessianBounds bounds) const;

 private:
  CostFunction(CostKind kind, double center, double weight)
      : kind_(kind), center_(center), weight_(weight) {}

  CostKind kind_;
  double center_ = 0.0;
  double weight_ = 1.0;
  std::optional<HessianBounds> declared_bounds_;
};

// Min/max of second central differences of Value on a uniform grid of
// `n_samples` points over [lo, hi]. Sampled, not certified.
HessianBounds SampleHessianBounds(const CostFunction& c, double lo, double hi,
                                  int n_samples);

struct HessianSampling {
  double lo = -10.0;
  double hi = 10.0;
  int n_samples = 2001;
};

// The N local costs plus the ensemble curvature bounds
// l_lower = min_i l_i, l_upper = max_i u_i. Declared bounds take precedence;
// quadratics contribute their exact curvature, the rest are sampled.
class CostEnsemble {
 public:
  explicit CostEnsemble(std::vector<CostFunction> costs,
                        HessianSampling sampling = {});

  int size() const { return static_cast<int>(costs_.size()); }
  const CostFunction& operator[](int i) const { return costs_[i]; }
  const std::vector<CostFunction>& costs() const { return costs_; }

  double l_lower() const { return l_lower_; }
  double l_upper() const { return l_upper_; }

  // sum_i grad f_i(y), summed in an order independent of the ensemble order.
  double GradientSum(double y) const;
  double Value(double y) const;

 private:
  std::vector<CostFunction> costs_;
  double l_lower_ = 0.0;
  double l_upper_ = 0.0;
};

// Minimizer y* of sum_i f_i(y): bracket expansion until the summed gradient
// changes sign, then bisection until |sum grad| <= tol. Throws
// Error(kUnbounded) once the bracket passes |y| = 1e9.
double GlobalOptimum(const CostEnsemble& e, double tol = 1e-10);

}  // namespace optcon
