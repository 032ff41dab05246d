#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dualgeo/expr.hpp"
#include "dualgeo/jet.hpp"

namespace dualgeo {

// A point (x^1..x^m, p_1..p_r) of the dual total space. Jet variables are
// numbered x first, then p.
struct Point {
  std::vector<double> x;
  std::vector<double> p;

  int m() const { return static_cast<int>(x.size()); }
  int r() const { return static_cast<int>(p.size()); }
  int n() const { return m() + r(); }
};

// A fixed-length list of scalar fields that can be expanded to any jet order
// at a point. Everything the engine differentiates is one of these: parsed
// expressions, brackets of sections, inverse metric blocks, Hessians.
class FieldVec {
 public:
  using Fn = std::function<std::vector<Jet>(const Point&, int order)>;

  FieldVec() = default;
  FieldVec(std::size_t size, Fn fn) : size_(size), fn_(std::move(fn)) {}

  static FieldVec from_exprs(std::vector<Expr> exprs);
  static FieldVec zero(std::size_t size);

  std::size_t size() const { return size_; }
  std::vector<Jet> operator()(const Point& pt, int order) const { return fn_(pt, order); }
  std::vector<double> values(const Point& pt) const;

  // The expressions behind this field, when it was built from them.
  const std::vector<Expr>* exprs() const { return exprs_ ? exprs_.get() : nullptr; }

 private:
  std::size_t size_ = 0;
  Fn fn_;
  std::shared_ptr<const std::vector<Expr>> exprs_;
};

// Inverse of a square matrix field given row-major; jets up to order 1
// (the inverse's derivative is -A^{-1} (dA) A^{-1}).
FieldVec inverse_field(FieldVec matrix, int n);

// Order-1 jets of the inverse of a matrix given by order-1 jets.
std::vector<Jet> invert_jets(const std::vector<Jet>& a, int n);

}  // namespace dualgeo
