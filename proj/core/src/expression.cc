#include "optcon/expression.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "optcon/error.h"

namespace optcon {

struct Expression::Node {
  enum class Op { kConst, kZeta, kR, kAdd, kSub, kMul, kNeg, kPow };
  Op op = Op::kConst;
  double value = 0.0;
  int exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr Make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// expr   := term (('+' | '-') term)*
// term   := unary ('*' unary)*
// unary  := '-' unary | power
// power  := atom ('^' integer)?
// atom   := number | 'zeta' | 'r' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr Run() {
    NodePtr root = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "expression '" << text_ << "': " << what << " at column "
        << pos_ + 1;
    throw Error(ErrorKind::kParse, msg.str());
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr ParseExpr() {
    NodePtr lhs = ParseTerm();
    for (;;) {
      if (Accept('+')) {
        lhs = Make(Node::Op::kAdd, lhs, ParseTerm());
      } else if (Accept('-')) {
        lhs = Make(Node::Op::kSub, lhs, ParseTerm());
      } else {
        return lhs;
      }
    }
  }

  NodePtr ParseTerm() {
    NodePtr lhs = ParseUnary();
    while (Accept('*')) lhs = Make(Node::Op::kMul, lhs, ParseUnary());
    return lhs;
  }

  NodePtr ParseUnary() {
    if (Accept('-')) return Make(Node::Op::kNeg, ParseUnary());
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  NodePtr ParsePower() {
    NodePtr base = ParseAtom();
    if (!Accept('^')) return base;
    SkipSpace();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("exponent must be a non-negative integer");
    if (pos_ < text_.size() && text_[pos_] == '.') {
      Fail("fractional exponents are not polynomial");
    }
    const int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
    auto n = std::make_shared<Node>();
    n->op = Node::Op::kPow;
    n->exponent = e;
    n->lhs = std::move(base);
    return n;
  }

  NodePtr ParseAtom() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = ParseExpr();
      if (!Accept(')')) Fail("missing ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(text_.substr(pos_));
      char* end = nullptr;
      const double value = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) Fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      auto n = std::make_shared<Node>();
      n->op = Node::Op::kConst;
      n->value = value;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "zeta") return Make(Node::Op::kZeta);
      if (name == "r") return Make(Node::Op::kR);
      pos_ = start;
      Fail("unknown identifier '" + std::string(name) +
           "' (allowed: zeta, r)");
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double Eval(const Node& n, double zeta, double r) {
  switch (n.op) {
    case Node::Op::kConst: return n.value;
    case Node::Op::kZeta: return zeta;
    case Node::Op::kR: return r;
    case Node::Op::kAdd: return Eval(*n.lhs, zeta, r) + Eval(*n.rhs, zeta, r);
    case Node::Op::kSub: return Eval(*n.lhs, zeta, r) - Eval(*n.rhs, zeta, r);
    case Node::Op::kMul: return Eval(*n.lhs, zeta, r) * Eval(*n.rhs, zeta, r);
    case Node::Op::kNeg: return -Eval(*n.lhs, zeta, r);
    case Node::Op::kPow: {
      const double base = Eval(*n.lhs, zeta, r);
      double out = 1.0;
      for (int k = 0; k < n.exponent; ++k) out *= base;
      return out;
    }
  }
  return 0.0;
}

bool UsesZeta(const Node& n) {
  if (n.op == Node::Op::kZeta) return true;
  return (n.lhs && UsesZeta(*n.lhs)) || (n.rhs && UsesZeta(*n.rhs));
}

}  // namespace

Expression Expression::Parse(std::string_view text) {
  return Expression(Parser(text).Run(), std::string(text));
}

double Expression::Evaluate(double zeta, double r) const {
  return Eval(*root_, zeta, r);
}

bool Expression::DependsOnZeta() const { return UsesZeta(*root_); }

}  // namespace optcon
