#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dualgeo/jet.hpp"

namespace dualgeo {

struct Point;

enum class Op { Number, X, P, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public ExprError {
 public:
  SyntaxError(std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class IndexRangeError : public ExprError {
 public:
  IndexRangeError(std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised when a point lies outside the domain of some subexpression.
class DomainError : public ExprError {
 public:
  DomainError(const std::string& what, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

struct ExprNode;

// Immutable expression tree over the coordinates (x1..xm, p1..pr). Copies
// share structure, so passing Exprs by value is cheap and thread-safe.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(double c);  // NOLINT: numbers convert implicitly

  static Expr x(int i);  // 1-based, as in the text form
  static Expr p(int a);
  static Expr unary(Op op, Expr arg);
  static Expr nary(Op op, std::vector<Expr> args);
  static Expr pow(Expr base, double exponent);

  Op op() const;
  double number() const;  // constant value, or the exponent of a Pow
  int index() const;      // 1-based atom index
  std::span<const Expr> args() const;

  bool is_number() const { return op() == Op::Number; }
  bool is_zero() const { return is_number() && number() == 0.0; }
  bool references_p() const;
  int max_x_index() const;
  int max_p_index() const;

  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

// Parses the prefix s-expression form. Atoms beyond x<m> or p<r> are rejected.
Expr parse_expr(std::string_view text, int m, int r);

// Replaces every x-atom x_i by replacement[i-1]; p-atoms are untouched.
Expr substitute_x(const Expr& e, std::span<const Expr> replacement);

Jet eval_jet(const Expr& e, const Point& pt, int order);
double eval_value(const Expr& e, const Point& pt);

}  // namespace dualgeo
