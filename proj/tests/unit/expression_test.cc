#include <gtest/gtest.h>

#include <string>

#include "optcon/error.h"
#include "optcon/expression.h"

namespace optcon {
namespace {

TEST(Expression, EvaluatesPolynomials) {
  EXPECT_DOUBLE_EQ(Expression::Parse("zeta^4 + r^4 + 1").Evaluate(1, 1), 3);
  EXPECT_DOUBLE_EQ(Expression::Parse("2*(zeta - r)^2").Evaluate(3, 1), 8);
  EXPECT_DOUBLE_EQ(Expression::Parse("-r^2").Evaluate(0, 3), -9);
  EXPECT_DOUBLE_EQ(Expression::Parse("1.5e1").Evaluate(0, 0), 15);
  EXPECT_DOUBLE_EQ(Expression::Parse("r^0").Evaluate(0, 0), 1);
  EXPECT_DOUBLE_EQ(Expression::Parse(" 1 - 2 - 3 ").Evaluate(0, 0), -4);
  EXPECT_DOUBLE_EQ(Expression::Parse("(2^3)^2").Evaluate(0, 0), 64);
  EXPECT_THROW(Expression::Parse("2^3^2"), Error);
}

TEST(Expression, TracksZetaDependence) {
  EXPECT_TRUE(Expression::Parse("zeta*0 + 1").DependsOnZeta());
  EXPECT_FALSE(Expression::Parse("r^4 + 1").DependsOnZeta());
  EXPECT_EQ(Expression::Parse("r + 1").text(), "r + 1");
}

TEST(Expression, RejectsNonPolynomialInput) {
  for (const char* bad : {"zeta / 2", "sin(r)", "r^0.5", "r^-1", "x + 1", "(r + 1", "",
                          "r +", "2 r", "1e"}) {
    try {
      Expression::Parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParse) << bad;
      EXPECT_NE(std::string(e.what()).find("column"), std::string::npos) << e.what();
    }
  }
}

}  // namespace
}  // namespace optcon
