#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dualgeo/algebroid.hpp"

namespace dualgeo {

// Gamma_{b a}(x, p): gamma[b*p_rank + a].
struct NonlinearConnection {
  int r_rank = 0;
  int p_rank = 0;
  std::vector<Expr> gamma;

  static NonlinearConnection zero(int r, int p) { return {r, p, std::vector<Expr>(r * p)}; }
  const Expr& at(int b, int a) const { return gamma[b * p_rank + a]; }
  FieldVec field() const { return FieldVec::from_exprs(gamma); }
};

// Everything the adapted frame needs, evaluated at one point.
struct LocalFrame {
  int m = 0, p = 0, r = 0;
  std::vector<double> rho;    // p x m
  std::vector<double> gamma;  // r x p
  std::vector<double> L;      // p^3

  double rho_at(int a, int i) const { return rho[a * m + i]; }
  double gamma_at(int b, int a) const { return gamma[b * p + a]; }
  double L_at(int g, int a, int b) const { return L[(g * p + a) * p + b]; }

  // delta_a f = rho_a^i df/dx^i + Gamma_{b a} df/dp_b, from a jet of order >= 1.
  double delta(int a, const Jet& f) const;
  // df/dp_c.
  double dot(int c, const Jet& f) const { return f.d(m + c); }
};

// Algebroid (composed with h) plus a nonlinear connection, with the fields
// prepared once for repeated evaluation.
class DualGeometry {
 public:
  DualGeometry(const AlgebroidSpec& spec, NonlinearConnection conn);

  int m() const { return spec_.m; }
  int p() const { return spec_.p_rank; }
  int r() const { return spec_.r_rank; }
  const AlgebroidSpec& spec() const { return spec_; }
  const NonlinearConnection& connection() const { return conn_; }

  LocalFrame frame(const Point& pt) const;
  std::vector<Jet> gamma_jets(const Point& pt, int order) const { return gamma_(pt, order); }
  std::vector<Jet> rho_jets(const Point& pt, int order) const { return rho_(pt, order); }

 private:
  AlgebroidSpec spec_;
  NonlinearConnection conn_;
  FieldVec rho_, L_, gamma_;
};

// A vector field on the dual total space, (dx^i, dp_a) components.
struct AnchoredVectorField {
  FieldVec dx;
  FieldVec dp;
  double apply(const Expr& f, const Point& pt) const;
};

// The anchor images of the adapted frame delta_a = d~_a + Gamma_{b a} d.^b.
std::vector<AnchoredVectorField> adapted_frame(const AlgebroidSpec& spec, const NonlinearConnection& conn);

// The dual adapted coframe: delta p_a = horizontal[a*p + b] dz^b + vertical[a*r + c] dp_c.
struct DualAdaptedCoframe {
  int p = 0, r = 0;
  std::vector<Expr> horizontal;  // -Gamma_{a b}
  std::vector<Expr> vertical;    // identity
};

DualAdaptedCoframe dual_adapted(const NonlinearConnection& conn);

// <delta p_a, delta_b> for every a, b; zero when the coframe is dual.
std::vector<double> coframe_pairing(const DualAdaptedCoframe& co, const NonlinearConnection& conn, const Point& pt);

// The four coefficient families at a point, each stored as
// (upper index, lower index, direction):
//   hh(al, be, ga) = H^al_{be ga}    hv(a, b, ga) = H^a_{b ga}
//   vh(al, be, c)  = V^{al c}_be     vv(a, b, c)  = V^{a c}_b
struct DlcValues {
  int p = 0, r = 0;
  std::vector<double> hh, hv, vh, vv;

  static DlcValues zero(int p, int r);

  double& Hh(int a, int b, int g) { return hh[(a * p + b) * p + g]; }
  double& Hv(int a, int b, int g) { return hv[(a * r + b) * p + g]; }
  double& Vh(int a, int b, int c) { return vh[(a * p + b) * r + c]; }
  double& Vv(int a, int b, int c) { return vv[(a * r + b) * r + c]; }
  double Hh(int a, int b, int g) const { return hh[(a * p + b) * p + g]; }
  double Hv(int a, int b, int g) const { return hv[(a * r + b) * p + g]; }
  double Vh(int a, int b, int c) const { return vh[(a * p + b) * r + c]; }
  double Vv(int a, int b, int c) const { return vv[(a * r + b) * r + c]; }

  DlcValues& operator+=(const DlcValues& o);
  double max_abs_diff(const DlcValues& o) const;
};

// Same layout, as expressions.
struct DlcExprs {
  std::vector<Expr> hh, hv, vh, vv;
  static DlcExprs zero(int p, int r);
};

// A distinguished linear connection that can be evaluated at points; keeps
// its expressions when it was given symbolically.
class DistinguishedConnection {
 public:
  using Evaluator = std::function<DlcValues(const Point&)>;

  DistinguishedConnection() = default;
  DistinguishedConnection(int p, int r, Evaluator eval, std::optional<DlcExprs> exprs = std::nullopt)
      : p_(p), r_(r), eval_(std::move(eval)), exprs_(std::move(exprs)) {}

  static DistinguishedConnection zero(int p, int r);
  static DistinguishedConnection from_exprs(int p, int r, DlcExprs exprs);

  int p() const { return p_; }
  int r() const { return r_; }
  DlcValues operator()(const Point& pt) const { return eval_(pt); }
  const std::optional<DlcExprs>& exprs() const { return exprs_; }

 private:
  int p_ = 0, r_ = 0;
  Evaluator eval_;
  std::optional<DlcExprs> exprs_;
};

// Hv^a_{b ga} = dGamma_{b ga}/dp_a; Hh^al_{be ga} = dGamma_{be ga}/dp_al when
// p_rank == r_rank (Greek and Latin slots identified), else 0; V families 0.
DistinguishedConnection berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn);
DlcValues berwald_at(int m, int p, int r, const std::vector<Jet>& gamma1);

// Valence of a d-tensor: numbers of upper/lower horizontal (Greek) and
// vertical (Latin) slots.
struct Valence {
  int up_h = 0, up_v = 0, low_h = 0, low_v = 0;
  int total() const { return up_h + up_v + low_h + low_v; }
};

// Components are stored row-major over the slots in the order
// (upper Greek..., upper Latin..., lower Greek..., lower Latin...).
class DTensor {
 public:
  static constexpr int kMaxValence = 4;
  DTensor(Valence v, int p, int r, FieldVec components);

  const Valence& valence() const { return valence_; }
  int p() const { return p_; }
  int r() const { return r_; }
  std::size_t size() const { return components_.size(); }
  const FieldVec& components() const { return components_; }

  static std::size_t component_count(Valence v, int p, int r);

 private:
  Valence valence_;
  int p_, r_;
  FieldVec components_;
};

// Horizontal and vertical covariant derivatives of a d-tensor at a point.
// Input jets need order >= 1. Sign pattern: upper Greek +, lower Greek -,
// upper Latin -, lower Latin +.
std::vector<double> h_cov_deriv_at(const LocalFrame& frame, const DlcValues& dlc, Valence v,
                                   const std::vector<Jet>& comps, int gamma);
std::vector<double> v_cov_deriv_at(const LocalFrame& frame, const DlcValues& dlc, Valence v,
                                   const std::vector<Jet>& comps, int c);

std::vector<double> h_cov_deriv(const DualGeometry& geo, const DistinguishedConnection& dlc, const DTensor& T,
                                int gamma, const Point& pt);
std::vector<double> v_cov_deriv(const DualGeometry& geo, const DistinguishedConnection& dlc, const DTensor& T,
                                int c, const Point& pt);

}  // namespace dualgeo
