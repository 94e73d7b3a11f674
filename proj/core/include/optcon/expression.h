#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace optcon {

// Polynomial expression in the variables `zeta` and `r`: numbers, + - *,
// parentheses, unary minus and `^` with a non-negative integer exponent.
// Anything else (division, functions, fractional powers) is a parse error.
class Expression {
 public:
  static Expression Parse(std::string_view text);

  double Evaluate(double zeta, double r) const;
  bool DependsOnZeta() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace optcon
