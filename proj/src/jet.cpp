#include "dualgeo/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace dualgeo {

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 0 || order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order must be in 0..3");
  reserve_layout();
}

void Jet::reserve_layout() {
  hess_ = 1 + dim_;
  third_ = hess_ + dim_ * dim_;
  std::size_t size = 1;
  if (order_ >= 1) size += dim_;
  if (order_ >= 2) size += static_cast<std::size_t>(dim_) * dim_;
  if (order_ >= 3) size += static_cast<std::size_t>(dim_) * dim_ * dim_;
  data_.assign(size, 0.0);
}

Jet Jet::constant(int dim, int order, double c) {
  Jet j(dim, order);
  j.data_[0] = c;
  return j;
}

Jet Jet::variable(int dim, int order, int index, double v) {
  Jet j(dim, order);
  j.data_[0] = v;
  if (order >= 1) j.data_[1 + index] = 1.0;
  return j;
}

void Jet::set_d(int i, int j, double v) {
  data_[hess_ + i * dim_ + j] = v;
  data_[hess_ + j * dim_ + i] = v;
}

void Jet::set_d(int i, int j, int k, double v) {
  const int n = dim_;
  auto at = [&](int a, int b, int c) -> double& { return data_[third_ + (a * n + b) * n + c]; };
  at(i, j, k) = v;
  at(i, k, j) = v;
  at(j, i, k) = v;
  at(j, k, i) = v;
  at(k, i, j) = v;
  at(k, j, i) = v;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet out(dim_, order);
  std::copy_n(data_.begin(), out.data_.size(), out.data_.begin());
  return out;
}

Jet Jet::partial(int i) const {
  if (order_ < 1) throw std::logic_error("partial derivative of an order-0 jet");
  Jet out(dim_, order_ - 1);
  out.data_[0] = d(i);
  const int n = dim_;
  if (out.order_ >= 1)
    for (int j = 0; j < n; ++j) out.data_[1 + j] = d(i, j);
  if (out.order_ >= 2)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.data_[out.hess_ + j * n + k] = d(i, j, k);
  return out;
}

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  const int n = dim_;
  Jet c(n, order_);
  c.data_[0] = f0;
  if (order_ >= 1)
    for (int i = 0; i < n; ++i) c.data_[1 + i] = f1 * d(i);
  if (order_ >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) c.set_d(i, j, f1 * d(i, j) + f2 * d(i) * d(j));
  if (order_ >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k)
          c.set_d(i, j, k,
                  f1 * d(i, j, k) + f2 * (d(i, j) * d(k) + d(i, k) * d(j) + d(j, k) * d(i)) +
                      f3 * d(i) * d(j) * d(k));
  return c;
}

Jet Jet::common(const Jet& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("jet dimension mismatch");
  return order_ <= o.order_ ? *this : truncated(o.order_);
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  if (dim_ != o.dim_) throw std::invalid_argument("jet dimension mismatch");
  for (std::size_t s = 0; s < data_.size(); ++s) data_[s] += o.data_[s];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncated(o.order_);
  if (dim_ != o.dim_) throw std::invalid_argument("jet dimension mismatch");
  for (std::size_t s = 0; s < data_.size(); ++s) data_[s] -= o.data_[s];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.data_) v = -v;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet c = a.common(b);
  std::fill(c.data_.begin(), c.data_.end(), 0.0);
  c.add_product(a, b);
  return c;
}

void Jet::add_product(const Jet& a, const Jet& b) {
  if (a.dim_ != dim_ || b.dim_ != dim_) throw std::invalid_argument("jet dimension mismatch");
  const int ord = std::min({order_, a.order_, b.order_});
  if (ord < order_) *this = truncated(ord);
  const int n = dim_;
  const double a0 = a.value(), b0 = b.value();
  data_[0] += a0 * b0;
  if (ord >= 1)
    for (int i = 0; i < n; ++i) data_[1 + i] += a0 * b.d(i) + a.d(i) * b0;
  if (ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        set_d(i, j, d(i, j) + (a0 * b.d(i, j) + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a.d(i, j) * b0));
  if (ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k)
          set_d(i, j, k,
                d(i, j, k) + (a0 * b.d(i, j, k) + a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) +
                              a.d(k) * b.d(i, j) + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) +
                              a.d(j, k) * b.d(i) + a.d(i, j, k) * b0));
}

}  // namespace dualgeo
