#include "dualgeo/field.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace dualgeo {

FieldVec FieldVec::from_exprs(std::vector<Expr> exprs) {
  auto shared = std::make_shared<const std::vector<Expr>>(std::move(exprs));
  FieldVec f(shared->size(), [shared](const Point& pt, int order) {
    std::vector<Jet> out;
    out.reserve(shared->size());
    for (const Expr& e : *shared) {
      if (e.is_number())
        out.push_back(Jet::constant(pt.n(), order, e.number()));
      else
        out.push_back(eval_jet(e, pt, order));
    }
    return out;
  });
  f.exprs_ = shared;
  return f;
}

FieldVec FieldVec::zero(std::size_t size) { return from_exprs(std::vector<Expr>(size)); }

std::vector<double> FieldVec::values(const Point& pt) const {
  if (exprs_) {
    std::vector<double> out;
    out.reserve(size_);
    for (const Expr& e : *exprs_) out.push_back(eval_value(e, pt));
    return out;
  }
  std::vector<double> out;
  for (const Jet& j : fn_(pt, 0)) out.push_back(j.value());
  return out;
}

std::vector<Jet> invert_jets(const std::vector<Jet>& a, int n) {
  if (static_cast<int>(a.size()) != n * n) throw std::invalid_argument("matrix size mismatch");
  const int dim = a.empty() ? 0 : a[0].dim();
  int order = 1;
  for (const Jet& j : a) order = std::min(order, j.order());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i * n + j].value();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw std::domain_error("singular matrix");
  const Eigen::MatrixXd inv = lu.inverse();
  std::vector<Jet> out(n * n, Jet(dim, order));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j].set_value(inv(i, j));
  if (order >= 1) {
    Eigen::MatrixXd dm(n, n);
    for (int v = 0; v < dim; ++v) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dm(i, j) = a[i * n + j].d(v);
      const Eigen::MatrixXd dinv = -inv * dm * inv;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i * n + j].set_d(v, dinv(i, j));
    }
  }
  return out;
}

FieldVec inverse_field(FieldVec matrix, int n) {
  return FieldVec(static_cast<std::size_t>(n) * n, [matrix = std::move(matrix), n](const Point& pt, int order) {
    if (order > 1) throw std::invalid_argument("inverse fields carry first derivatives only");
    return invert_jets(matrix(pt, order), n);
  });
}

}  // namespace dualgeo
