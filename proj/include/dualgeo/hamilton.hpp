#pragma once

#include <functional>
#include <vector>

#include "dualgeo/metric.hpp"

namespace dualgeo {

enum class FunctionKind { Hamilton, Cartan };

struct HamiltonFunction {
  Expr expr;
  FunctionKind kind = FunctionKind::Hamilton;
};

// p-Hessian of H (of K*K for Cartan), row-major r x r, optionally halved.
std::vector<double> hessian_metric(const HamiltonFunction& H, const Point& pt, bool half = false);
// The same as a field, available up to jet order 1.
FieldVec hessian_metric_field(const HamiltonFunction& H, int r, bool half = false);

// Residual is the shortfall tol - min |det|, zero when regular everywhere.
CheckReport check_regularity(const HamiltonFunction& H, int m, int r, const CheckOptions& opt, bool half = false);
// Euler residual |p_a dK/dp_a - K|, plus positivity of K and positive
// definiteness of the K*K Hessian.
CheckReport check_homogeneity(const HamiltonFunction& K, int m, int r, const CheckOptions& opt, bool half = false);

// G = g~_{ab} dz^a dz^b + g^{ab} dp_a dp_b with g~ the inverse of g_v.
PseudoMetric induced_metric(const FieldVec& g_v, int r);

// Normal connection coefficients (Greek and Latin families coincide):
//   h(a, b, c) = H^a_{bc}, c the direction    v(a, b, c) = V^{ac}_b
struct NormalValues {
  int r = 0;
  std::vector<double> h, v;

  static NormalValues zero(int r);
  double& H(int a, int b, int c) { return h[(a * r + b) * r + c]; }
  double& V(int a, int b, int c) { return v[(a * r + b) * r + c]; }
  double H(int a, int b, int c) const { return h[(a * r + b) * r + c]; }
  double V(int a, int b, int c) const { return v[(a * r + b) * r + c]; }
};

struct NormalConnection {
  int r = 0;
  std::function<NormalValues(const Point&)> eval;

  NormalValues operator()(const Point& pt) const { return eval(pt); }
  // As a distinguished connection acting on the block metric: the Greek
  // families are H and V, the Latin ones their negatives (momentum slots
  // transform contragrediently).
  DistinguishedConnection to_dlc() const;
};

DlcValues normal_to_dlc(const NormalValues& n);

// Christoffel-type connection of g~ along the adapted frame with the three
// structure-function terms, and the vertical Christoffel connection of g_v.
NormalConnection levi_civita_normal(const AlgebroidSpec& spec, const NonlinearConnection& conn, const FieldVec& g_v);

// Prescribed torsions, stored like the coefficients:
//   T[(a*r + b)*r + c] = T^a_{bc}    S[(a*r + b)*r + c] = S^{ac}_b
struct TorsionPrescription {
  int r = 0;
  std::vector<Expr> T, S;

  static TorsionPrescription zero(int r);
  // Throws std::invalid_argument on shape errors or when antisymmetry fails
  // at any of the sample points.
  void validate(const std::vector<Point>& pts) const;
};

struct TorsionValues {
  int r = 0;
  std::vector<double> T, S;
  double max_abs_diff(const TorsionValues& o) const;
};

TorsionValues torsion_values(const TorsionPrescription& P, const Point& pt);

NormalConnection torsion_family(const NormalConnection& base, const FieldVec& g_v, const TorsionPrescription& P);

// T^a_{bc} = H^a_{bc} - H^a_{cb} + L^a_{bc}, S^{ac}_b = V^{ac}_b - V^{ca}_b.
TorsionValues torsion_recover_at(const LocalFrame& f, const NormalValues& n);
std::function<TorsionValues(const Point&)> torsion_recover(const AlgebroidSpec& spec, const NormalConnection& n);

// Torsion of the Levi-Civita connection, round trip of P through the
// family, and compatibility of the family with the induced metric.
CheckReport check_torsion_roundtrip(const AlgebroidSpec& spec, const NonlinearConnection& conn, const FieldVec& g_v,
                                    const TorsionPrescription& P, const CheckOptions& opt);

// Random constant prescription, antisymmetric in the required pairs.
TorsionPrescription random_prescription(int r, std::uint64_t seed);

}  // namespace dualgeo
