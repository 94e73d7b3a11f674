#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "optcon/costs.h"
#include "optcon/error.h"

namespace optcon {
namespace {

std::vector<CostFunction> AllCosts() {
  return {CostFunction::Quadratic(1.5), CostFunction::Quadratic(-2.0, 3.0),
          CostFunction::Example2(1), CostFunction::Example2(2),
          CostFunction::Example2(3), CostFunction::Example2(4)};
}

// Independent evaluation of the four heterogeneous costs.
double ReferenceValue(int index, double y) {
  switch (index) {
    case 1: return (y - 8) * (y - 8);
    case 2: return y * y / (80 * std::log(y * y + 2)) + (y - 5) * (y - 5);
    case 3: return y * y / (20 * std::sqrt(y * y + 1)) + y * y;
    default: return std::log(std::exp(-0.05 * y) + std::exp(0.05 * y)) + y * y;
  }
}

TEST(Costs, GradientMatchesFiniteDifference) {
  const double h = 1e-5;
  for (const auto& c : AllCosts()) {
    for (int k = -10; k <= 10; ++k) {
      const double y = k;
      const double fd = (c.Value(y + h) - c.Value(y - h)) / (2 * h);
      EXPECT_LE(std::abs(c.Gradient(y) - fd), 1e-5) << c.name() << " y=" << y;
    }
  }
}

TEST(Costs, ValuesMatchReferenceFormulas) {
  for (int i = 1; i <= 4; ++i) {
    const CostFunction c = CostFunction::Example2(i);
    for (double y : {-7.5, -1.0, 0.0, 0.3, 3.24, 9.0}) {
      EXPECT_NEAR(c.Value(y), ReferenceValue(i, y), 1e-12 * (1 + std::abs(ReferenceValue(i, y))));
    }
  }
}

TEST(Costs, GradientExamples) {
  EXPECT_EQ(CostFunction::Quadratic(2.5).Gradient(2.5), 0.0);
  EXPECT_DOUBLE_EQ(CostFunction::Example2(1).Gradient(0.0), -16.0);
  EXPECT_EQ(CostFunction::Example2(4).Gradient(0.0), 0.0);
}

TEST(Costs, LargeArgumentsStayFinite) {
  const CostFunction f4 = CostFunction::Example2(4);
  EXPECT_TRUE(std::isfinite(f4.Value(1e5)));
  EXPECT_TRUE(std::isfinite(f4.Gradient(-1e5)));
}

TEST(Costs, HessianBoundExamples) {
  const HessianBounds q = SampleHessianBounds(CostFunction::Quadratic(0.0), -3, 7, 101);
  EXPECT_NEAR(q.lower, 1.0, 1e-6);
  EXPECT_NEAR(q.upper, 1.0, 1e-6);
  const HessianBounds f1 = SampleHessianBounds(CostFunction::Example2(1), -10, 10, 2001);
  EXPECT_NEAR(f1.lower, 2.0, 1e-4);
  EXPECT_NEAR(f1.upper, 2.0, 1e-4);
  for (int i = 2; i <= 4; ++i) {
    const HessianBounds b = SampleHessianBounds(CostFunction::Example2(i), -10, 10, 2001);
    EXPECT_GE(b.lower, 1.0 - 0.05) << i;
    EXPECT_LE(b.upper, 3.0 + 0.05) << i;
  }
}

TEST(Costs, DeclaredBoundsContainSampledCurvature) {
  for (int i = 1; i <= 4; ++i) {
    const CostFunction c = CostFunction::Example2(i).WithDeclaredBounds({1, 3});
    const HessianBounds s = SampleHessianBounds(c, -10, 10, 2001);
    EXPECT_GE(s.lower, c.declared_bounds()->lower - 1e-3);
    EXPECT_LE(s.upper, c.declared_bounds()->upper + 1e-3);
  }
}

TEST(Costs, HessianSamplingRejectsDegenerateInterval) {
  try {
    SampleHessianBounds(CostFunction::Quadratic(0.0), 1, 1, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidRange);
  }
  EXPECT_THROW(SampleHessianBounds(CostFunction::Quadratic(0.0), 0, 1, 2), Error);
}

TEST(Costs, EnsembleBounds) {
  const CostEnsemble e({CostFunction::Quadratic(0, 2), CostFunction::Quadratic(1, 0.5)});
  EXPECT_DOUBLE_EQ(e.l_lower(), 0.5);
  EXPECT_DOUBLE_EQ(e.l_upper(), 2.0);
  std::vector<CostFunction> declared;
  for (int i = 1; i <= 4; ++i) declared.push_back(CostFunction::Example2(i).WithDeclaredBounds({1, 3}));
  const CostEnsemble d(declared);
  EXPECT_EQ(d.l_lower(), 1.0);
  EXPECT_EQ(d.l_upper(), 3.0);
}

TEST(Costs, OptimumOfQuadraticsIsMean) {
  const double q[] = {0.3, -1.7, 2.2, 1.1};
  std::vector<CostFunction> cs;
  for (double c : q) cs.push_back(CostFunction::Quadratic(c));
  EXPECT_NEAR(GlobalOptimum(CostEnsemble(cs)), (0.3 - 1.7 + 2.2 + 1.1) / 4, 1e-9);
}

TEST(Costs, OptimumOfExampleTwoEnsemble) {
  std::vector<CostFunction> cs;
  for (int i = 1; i <= 4; ++i) cs.push_back(CostFunction::Example2(i));
  const CostEnsemble e(cs);
  const double y = GlobalOptimum(e);
  EXPECT_NEAR(y, 3.24, 0.01);
  EXPECT_LE(std::abs(e.GradientSum(y)), 1e-10);

  // Independent oracle: golden-section search on the summed value.
  auto total = [](double t) {
    double s = 0;
    for (int i = 1; i <= 4; ++i) s += ReferenceValue(i, t);
    return s;
  };
  double a = -20, b = 20;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (total(c) < total(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  EXPECT_NEAR(y, 0.5 * (a + b), 1e-6);
}

TEST(Costs, OptimumOfSingleCost) {
  const CostEnsemble e({CostFunction::Quadratic(5.0, 2.0)});
  EXPECT_NEAR(GlobalOptimum(e, 1e-10), 5.0, 1e-10);
}

TEST(Costs, OptimumIsPermutationInvariantBitwise) {
  std::vector<CostFunction> cs;
  for (int i = 1; i <= 4; ++i) cs.push_back(CostFunction::Example2(i));
  cs.push_back(CostFunction::Quadratic(0.7, 1.3));
  const double ref = GlobalOptimum(CostEnsemble(cs));
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(cs.begin(), cs.end(), gen);
    EXPECT_EQ(GlobalOptimum(CostEnsemble(cs)), ref);
  }
}

TEST(Costs, NonConvexEnsembleIsRejected) {
  EXPECT_THROW(CostFunction::Quadratic(0.0, 0.0), Error);
  EXPECT_THROW(CostFunction::Example2(1).WithDeclaredBounds({0.0, 2.0}), Error);
  try {
    // Out here the second differences are pure rounding noise.
    CostEnsemble e({CostFunction::Example2(4)}, HessianSampling{1e9, 1e9 + 1000, 1001});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAssumption);
  }
}

TEST(Costs, OptimumPropertyResidualBelowTolerance) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-50, 50), w(0.1, 5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<CostFunction> cs;
    const int n = 1 + trial % 6;
    for (int i = 0; i < n; ++i) cs.push_back(CostFunction::Quadratic(u(gen), w(gen)));
    if (trial % 2) cs.push_back(CostFunction::Example2(1 + trial % 4));
    const CostEnsemble e(cs);
    EXPECT_LE(std::abs(e.GradientSum(GlobalOptimum(e, 1e-10))), 1e-10);
  }
}

}  // namespace
}  // namespace optcon
