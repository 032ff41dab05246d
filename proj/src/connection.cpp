#include "dualgeo/connection.hpp"

#include <cmath>
#include <stdexcept>

namespace dualgeo {

double LocalFrame::delta(int a, const Jet& f) const {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += rho_at(a, i) * f.d(i);
  for (int b = 0; b < r; ++b) s += gamma_at(b, a) * f.d(m + b);
  return s;
}

DualGeometry::DualGeometry(const AlgebroidSpec& spec, NonlinearConnection conn)
    : spec_(spec.composed()), conn_(std::move(conn)) {
  spec_.validate();
  if (conn_.gamma.empty()) conn_ = NonlinearConnection::zero(spec_.r_rank, spec_.p_rank);
  if (conn_.r_rank != spec_.r_rank || conn_.p_rank != spec_.p_rank ||
      static_cast<int>(conn_.gamma.size()) != spec_.r_rank * spec_.p_rank)
    throw std::invalid_argument("nonlinear connection must be r_rank x p_rank");
  rho_ = FieldVec::from_exprs(spec_.rho);
  L_ = FieldVec::from_exprs(spec_.L);
  gamma_ = conn_.field();
}

LocalFrame DualGeometry::frame(const Point& pt) const {
  LocalFrame f;
  f.m = m();
  f.p = p();
  f.r = r();
  f.rho = rho_.values(pt);
  f.gamma = gamma_.values(pt);
  f.L = L_.values(pt);
  return f;
}

double AnchoredVectorField::apply(const Expr& f, const Point& pt) const {
  const Jet j = eval_jet(f, pt, 1);
  const std::vector<double> x = dx.values(pt), y = dp.values(pt);
  double s = 0.0;
  for (int i = 0; i < pt.m(); ++i) s += x[i] * j.d(i);
  for (int a = 0; a < pt.r(); ++a) s += y[a] * j.d(pt.m() + a);
  return s;
}

std::vector<AnchoredVectorField> adapted_frame(const AlgebroidSpec& spec, const NonlinearConnection& conn) {
  const AlgebroidSpec c = spec.composed();
  std::vector<AnchoredVectorField> out;
  for (int a = 0; a < c.p_rank; ++a) {
    std::vector<Expr> dx(c.m), dp(c.r_rank);
    for (int i = 0; i < c.m; ++i) dx[i] = c.rho_at(a, i);
    for (int b = 0; b < c.r_rank; ++b) dp[b] = conn.at(b, a);
    out.push_back({FieldVec::from_exprs(dx), FieldVec::from_exprs(dp)});
  }
  return out;
}

DualAdaptedCoframe dual_adapted(const NonlinearConnection& conn) {
  DualAdaptedCoframe co;
  co.p = conn.p_rank;
  co.r = conn.r_rank;
  for (const Expr& g : conn.gamma) co.horizontal.push_back(-g);
  co.vertical.assign(co.r * co.r, Expr());
  for (int a = 0; a < co.r; ++a) co.vertical[a * co.r + a] = Expr(1.0);
  return co;
}

std::vector<double> coframe_pairing(const DualAdaptedCoframe& co, const NonlinearConnection& conn, const Point& pt) {
  // delta_b has natural components Z = e_b, Y_c = Gamma_{c b}.
  std::vector<double> out(co.r * co.p, 0.0);
  for (int a = 0; a < co.r; ++a)
    for (int b = 0; b < co.p; ++b) {
      double s = eval_value(co.horizontal[a * co.p + b], pt);
      for (int c = 0; c < co.r; ++c) s += eval_value(co.vertical[a * co.r + c], pt) * eval_value(conn.at(c, b), pt);
      out[a * co.p + b] = s;
    }
  return out;
}

DlcValues DlcValues::zero(int p, int r) {
  DlcValues v;
  v.p = p;
  v.r = r;
  v.hh.assign(p * p * p, 0.0);
  v.hv.assign(r * r * p, 0.0);
  v.vh.assign(p * p * r, 0.0);
  v.vv.assign(r * r * r, 0.0);
  return v;
}

DlcValues& DlcValues::operator+=(const DlcValues& o) {
  for (std::size_t k = 0; k < hh.size(); ++k) hh[k] += o.hh[k];
  for (std::size_t k = 0; k < hv.size(); ++k) hv[k] += o.hv[k];
  for (std::size_t k = 0; k < vh.size(); ++k) vh[k] += o.vh[k];
  for (std::size_t k = 0; k < vv.size(); ++k) vv[k] += o.vv[k];
  return *this;
}

double DlcValues::max_abs_diff(const DlcValues& o) const {
  double worst = 0.0;
  auto scan = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  };
  scan(hh, o.hh);
  scan(hv, o.hv);
  scan(vh, o.vh);
  scan(vv, o.vv);
  return worst;
}

DlcExprs DlcExprs::zero(int p, int r) {
  return {std::vector<Expr>(p * p * p), std::vector<Expr>(r * r * p), std::vector<Expr>(p * p * r),
          std::vector<Expr>(r * r * r)};
}

DistinguishedConnection DistinguishedConnection::zero(int p, int r) { return from_exprs(p, r, DlcExprs::zero(p, r)); }

DistinguishedConnection DistinguishedConnection::from_exprs(int p, int r, DlcExprs exprs) {
  if (static_cast<int>(exprs.hh.size()) != p * p * p || static_cast<int>(exprs.hv.size()) != r * r * p ||
      static_cast<int>(exprs.vh.size()) != p * p * r || static_cast<int>(exprs.vv.size()) != r * r * r)
    throw std::invalid_argument("distinguished connection arrays have the wrong shape");
  auto hh = FieldVec::from_exprs(exprs.hh), hv = FieldVec::from_exprs(exprs.hv);
  auto vh = FieldVec::from_exprs(exprs.vh), vv = FieldVec::from_exprs(exprs.vv);
  return DistinguishedConnection(
      p, r,
      [=](const Point& pt) {
        DlcValues v;
        v.p = p;
        v.r = r;
        v.hh = hh.values(pt);
        v.hv = hv.values(pt);
        v.vh = vh.values(pt);
        v.vv = vv.values(pt);
        return v;
      },
      std::move(exprs));
}

DlcValues berwald_at(int m, int p, int r, const std::vector<Jet>& gamma1) {
  DlcValues v = DlcValues::zero(p, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int g = 0; g < p; ++g) v.Hv(a, b, g) = gamma1[b * p + g].d(m + a);
  if (p == r)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int g = 0; g < p; ++g) v.Hh(a, b, g) = gamma1[b * p + g].d(m + a);
  return v;
}

DistinguishedConnection berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn) {
  const DualGeometry geo(spec, conn);
  const FieldVec gamma = conn.field();
  const int m = geo.m(), p = geo.p(), r = geo.r();
  return DistinguishedConnection(p, r, [=](const Point& pt) { return berwald_at(m, p, r, gamma(pt, 1)); });
}

// ------------------------------------------------------------------ d-tensors

std::size_t DTensor::component_count(Valence v, int p, int r) {
  std::size_t n = 1;
  for (int k = 0; k < v.up_h + v.low_h; ++k) n *= p;
  for (int k = 0; k < v.up_v + v.low_v; ++k) n *= r;
  return n;
}

DTensor::DTensor(Valence v, int p, int r, FieldVec components)
    : valence_(v), p_(p), r_(r), components_(std::move(components)) {
  if (v.up_h < 0 || v.up_v < 0 || v.low_h < 0 || v.low_v < 0 || v.total() > kMaxValence)
    throw std::invalid_argument("d-tensor valence must be non-negative with total at most 4");
  if (components_.size() != component_count(v, p, r))
    throw std::invalid_argument("d-tensor component count does not match its valence");
}

namespace {

enum class Slot { UpGreek, UpLatin, LowGreek, LowLatin };

struct SlotLayout {
  std::vector<Slot> kinds;
  std::vector<int> dims;
  std::vector<std::size_t> strides;
  std::size_t size = 1;

  SlotLayout(Valence v, int p, int r) {
    auto push = [&](Slot s, int count, int dim) {
      for (int k = 0; k < count; ++k) {
        kinds.push_back(s);
        dims.push_back(dim);
      }
    };
    push(Slot::UpGreek, v.up_h, p);
    push(Slot::UpLatin, v.up_v, r);
    push(Slot::LowGreek, v.low_h, p);
    push(Slot::LowLatin, v.low_v, r);
    strides.assign(kinds.size(), 1);
    for (int s = static_cast<int>(kinds.size()) - 1; s >= 0; --s) {
      strides[s] = size;
      size *= dims[s];
    }
  }
};

// Shared skeleton of both covariant derivatives: `base` is the derivative of
// each component, `coeff(slot, own, other)` the connection coefficient that
// couples the slot's own index to the summed one, with the sign applied here.
template <class Base, class Coeff>
std::vector<double> cov_deriv(const SlotLayout& lay, const std::vector<Jet>& comps, Base base, Coeff coeff) {
  if (comps.size() != lay.size) throw std::invalid_argument("component count mismatch");
  std::vector<double> out(lay.size);
  for (std::size_t I = 0; I < lay.size; ++I) {
    double s = base(comps[I]);
    for (std::size_t k = 0; k < lay.kinds.size(); ++k) {
      const int own = static_cast<int>((I / lay.strides[k]) % lay.dims[k]);
      const std::size_t rest = I - own * lay.strides[k];
      const double sign = (lay.kinds[k] == Slot::UpGreek || lay.kinds[k] == Slot::LowLatin) ? 1.0 : -1.0;
      for (int o = 0; o < lay.dims[k]; ++o) {
        const double c = coeff(lay.kinds[k], own, o);
        if (c != 0.0) s += sign * c * comps[rest + o * lay.strides[k]].value();
      }
    }
    out[I] = s;
  }
  return out;
}

}  // namespace

std::vector<double> h_cov_deriv_at(const LocalFrame& frame, const DlcValues& dlc, Valence v,
                                   const std::vector<Jet>& comps, int gamma) {
  const SlotLayout lay(v, frame.p, frame.r);
  return cov_deriv(
      lay, comps, [&](const Jet& j) { return frame.delta(gamma, j); },
      [&](Slot kind, int own, int o) {
        switch (kind) {
          case Slot::UpGreek: return dlc.Hh(own, o, gamma);
          case Slot::LowGreek: return dlc.Hh(o, own, gamma);
          case Slot::UpLatin: return dlc.Hv(own, o, gamma);
          case Slot::LowLatin: return dlc.Hv(o, own, gamma);
        }
        return 0.0;
      });
}

std::vector<double> v_cov_deriv_at(const LocalFrame& frame, const DlcValues& dlc, Valence v,
                                   const std::vector<Jet>& comps, int c) {
  const SlotLayout lay(v, frame.p, frame.r);
  return cov_deriv(
      lay, comps, [&](const Jet& j) { return frame.dot(c, j); },
      [&](Slot kind, int own, int o) {
        switch (kind) {
          case Slot::UpGreek: return dlc.Vh(own, o, c);
          case Slot::LowGreek: return dlc.Vh(o, own, c);
          case Slot::UpLatin: return dlc.Vv(own, o, c);
          case Slot::LowLatin: return dlc.Vv(o, own, c);
        }
        return 0.0;
      });
}

std::vector<double> h_cov_deriv(const DualGeometry& geo, const DistinguishedConnection& dlc, const DTensor& T,
                                int gamma, const Point& pt) {
  return h_cov_deriv_at(geo.frame(pt), dlc(pt), T.valence(), T.components()(pt, 1), gamma);
}

std::vector<double> v_cov_deriv(const DualGeometry& geo, const DistinguishedConnection& dlc, const DTensor& T,
                                int c, const Point& pt) {
  return v_cov_deriv_at(geo.frame(pt), dlc(pt), T.valence(), T.components()(pt, 1), c);
}

}  // namespace dualgeo
