#include "optcon/costs.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optcon/error.h"

namespace optcon {

CostFunction CostFunction::Quadratic(double center, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight) || !std::isfinite(center)) {
    throw Error(ErrorKind::kInvalidParameter,
                "quadratic cost needs finite center and positive weight");
  }
  return CostFunction(CostKind::kQuadratic, center, weight);
}

CostFunction CostFunction::Example2(int index) {
  switch (index) {
    case 1: return CostFunction(CostKind::kExample2F1, 0.0, 1.0);
    case 2: return CostFunction(CostKind::kExample2F2, 0.0, 1.0);
    case 3: return CostFunction(CostKind::kExample2F3, 0.0, 1.0);
    case 4: return CostFunction(CostKind::kExample2F4, 0.0, 1.0);
    default:
      throw Error(ErrorKind::kInvalidParameter,
                  "example2 cost index must be 1..4, got " +
                      std::to_string(index));
  }
}

std::string CostFunction::name() const {
  switch (kind_) {
    case CostKind::kQuadratic: return "quadratic";
    case CostKind::kExample2F1: return "example2_f1";
    case CostKind::kExample2F2: return "example2_f2";
    case CostKind::kExample2F3: return "example2_f3";
    case CostKind::kExample2F4: return "example2_f4";
  }
  return "unknown";
}

CostFunction CostFunction::WithDeclaredBounds(HessianBounds bounds) const {
  if (!(bounds.lower > 0.0) || !(bounds.upper >= bounds.lower) ||
      !std::isfinite(bounds.upper)) {
    throw Error(ErrorKind::kInvalidParameter,
                "declared hessian bounds need 0 < lower <= upper < inf");
  }
  CostFunction copy = *this;
  copy.declared_bounds_ = bounds;
  return copy;
}

namespace {

// ln(e^{-a} + e^{a}) without overflow.
double LogTwoCosh(double a) {
  const double m = std::abs(a);
  return m + std::log1p(std::exp(-2.0 * m));
}

}  // namespace

double CostFunction::Value(double y) const {
  switch (kind_) {
    case CostKind::kQuadratic: {
      const double d = y - center_;
      return 0.5 * weight_ * d * d;
    }
    case CostKind::kExample2F1:
      return (y - 8.0) * (y - 8.0);
    case CostKind::kExample2F2:
      return y * y / (80.0 * std::log(y * y + 2.0)) + (y - 5.0) * (y - 5.0);
    case CostKind::kExample2F3:
      return y * y / (20.0 * std::sqrt(y * y + 1.0)) + y * y;
    case CostKind::kExample2F4:
      return LogTwoCosh(0.05 * y) + y * y;
  }
  return 0.0;
}

double CostFunction::Gradient(double y) const {
  switch (kind_) {
    case CostKind::kQuadratic:
      return weight_ * (y - center_);
    case CostKind::kExample2F1:
      return 2.0 * (y - 8.0);
    case CostKind::kExample2F2: {
      const double s = std::log(y * y + 2.0);
      const double ds = 2.0 * y / (y * y + 2.0);
      return (2.0 * y * s - y * y * ds) / (80.0 * s * s) + 2.0 * (y - 5.0);
    }
    case CostKind::kExample2F3: {
      // d/dy y^2 (y^2+1)^{-1/2} = (y^3 + 2y) (y^2+1)^{-3/2}
      const double q = y * y + 1.0;
      return (y * y * y + 2.0 * y) / (20.0 * q * std::sqrt(q)) + 2.0 * y;
    }
    case CostKind::kExample2F4:
      return 0.05 * std::tanh(0.05 * y) + 2.0 * y;
  }
  return 0.0;
}

HessianBounds SampleHessianBounds(const CostFunction& c, double lo, double hi,
                                  int n_samples) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::kInvalidRange, "hessian sampling needs lo < hi");
  }
  if (n_samples < 3) {
    throw Error(ErrorKind::kInvalidRange, "hessian sampling needs >= 3 points");
  }
  const double step = (hi - lo) / (n_samples - 1);
  HessianBounds b{INFINITY, -INFINITY};
  double prev = c.Value(lo);
  double cur = c.Value(lo + step);
  for (int k = 2; k < n_samples; ++k) {
    const double next = c.Value(lo + k * step);
    const double second = (next - 2.0 * cur + prev) / (step * step);
    b.lower = std::min(b.lower, second);
    b.upper = std::max(b.upper, second);
    prev = cur;
    cur = next;
  }
  return b;
}

CostEnsemble::CostEnsemble(std::vector<CostFunction> costs,
                           HessianSampling sampling)
    : costs_(std::move(costs)) {
  if (costs_.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "cost ensemble is empty");
  }
  l_lower_ = INFINITY;
  l_upper_ = -INFINITY;
  for (const auto& c : costs_) {
    HessianBounds b;
    if (c.declared_bounds()) {
      b = *c.declared_bounds();
    } else if (c.kind() == CostKind::kQuadratic) {
      b = {c.weight(), c.weight()};
    } else {
      b = SampleHessianBounds(c, sampling.lo, sampling.hi, sampling.n_samples);
    }
    l_lower_ = std::min(l_lower_, b.lower);
    l_upper_ = std::max(l_upper_, b.upper);
  }
  if (!(l_lower_ > 0.0) || !std::isfinite(l_upper_)) {
    std::ostringstream msg;
    msg << "ensemble is not strongly convex: curvature bounds [" << l_lower_
        << ", " << l_upper_ << "]";
    throw Error(ErrorKind::kAssumption, msg.str());
  }
}

double CostEnsemble::GradientSum(double y) const {
  std::vector<double> g;
  g.reserve(costs_.size());
  for (const auto& c : costs_) g.push_back(c.Gradient(y));
  std::sort(g.begin(), g.end());
  double s = 0.0;
  for (double v : g) s += v;
  return s;
}

double CostEnsemble::Value(double y) const {
  std::vector<double> f;
  f.reserve(costs_.size());
  for (const auto& c : costs_) f.push_back(c.Value(y));
  std::sort(f.begin(), f.end());
  double s = 0.0;
  for (double v : f) s += v;
  return s;
}

double GlobalOptimum(const CostEnsemble& e, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "optimum tolerance must be > 0");
  }
  constexpr double kLimit = 1e9;
  double lo = -1.0;
  double hi = 1.0;
  // The summed gradient is strictly increasing, so expand until it brackets 0.
  while (e.GradientSum(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -kLimit) {
      throw Error(ErrorKind::kUnbounded,
                  "summed gradient stays positive below -1e9");
    }
  }
  while (e.GradientSum(hi) < 0.0) {
    hi *= 2.0;
    if (hi > kLimit) {
      throw Error(ErrorKind::kUnbounded,
                  "summed gradient stays negative above 1e9");
    }
  }

  double best = lo;
  double best_residual = std::abs(e.GradientSum(lo));
  if (std::abs(e.GradientSum(hi)) < best_residual) {
    best = hi;
    best_residual = std::abs(e.GradientSum(hi));
  }
  while (best_residual > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in doubles
    const double g = e.GradientSum(mid);
    if (std::abs(g) < best_residual) {
      best = mid;
      best_residual = std::abs(g);
    }
    if (g > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace optcon
