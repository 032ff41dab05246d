#pragma once

#include <vector>

namespace dualgeo {

// Truncated Taylor expansion of a scalar field: the value and every partial
// derivative up to `order` (at most 3) in `dim` variables. The second and
// third derivative tables are dense, and they are exactly symmetric because
// only sorted index tuples are ever computed; the other slots are copies.
class Jet {
 public:
  static constexpr int kMaxOrder = 3;

  Jet() = default;
  Jet(int dim, int order);

  static Jet constant(int dim, int order, double c);
  static Jet variable(int dim, int order, int index, double v);

  int dim() const { return dim_; }
  int order() const { return order_; }

  double value() const { return data_[0]; }
  double d(int i) const { return data_[1 + i]; }
  double d(int i, int j) const { return data_[hess_ + i * dim_ + j]; }
  double d(int i, int j, int k) const { return data_[third_ + (i * dim_ + j) * dim_ + k]; }

  void set_value(double v) { data_[0] = v; }
  void set_d(int i, double v) { data_[1 + i] = v; }
  // Writes every permutation of the index tuple.
  void set_d(int i, int j, double v);
  void set_d(int i, int j, int k, double v);

  // Same field, fewer derivative slots.
  Jet truncated(int order) const;
  // The jet of the partial derivative along variable i; one order lower.
  Jet partial(int i) const;

  // f(u) where f0..f3 are f and its first three derivatives at u.value().
  Jet compose(double f0, double f1, double f2, double f3) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  // Adds a * b into this jet without building the intermediate product.
  void add_product(const Jet& a, const Jet& b);

 private:
  void reserve_layout();
  Jet common(const Jet& o) const;

  int dim_ = 0;
  int order_ = 0;
  int hess_ = 0;
  int third_ = 0;
  std::vector<double> data_;
};

}  // namespace dualgeo
