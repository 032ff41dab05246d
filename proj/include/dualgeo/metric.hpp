#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualgeo/connection.hpp"

namespace dualgeo {

inline constexpr double kMinMetricDet = 1e-10;
inline constexpr double kConditionWarning = 1e8;

// Block metric g_{ab} dz^a dz^b + g^{ab} dp_a dp_b, both blocks row-major.
struct PseudoMetric {
  int p = 0, r = 0;
  FieldVec g_h;  // p x p, lower horizontal indices
  FieldVec g_v;  // r x r, upper vertical indices

  static PseudoMetric from_exprs(int p, int r, std::vector<Expr> g_h, std::vector<Expr> g_v);
};

class SingularMetricError : public std::domain_error {
 public:
  SingularMetricError(const std::string& block, double det, double condition);
  double det() const { return det_; }
  double condition() const { return condition_; }

 private:
  double det_, condition_;
};

struct MetricInverse {
  Eigen::MatrixXd h_inv;  // g~^{ab}, inverse of the horizontal block
  Eigen::MatrixXd v_inv;  // g~_{ab}, inverse of the vertical block
  double det_h = 0, det_v = 0;
  double cond_h = 0, cond_v = 0;
};

// Throws SingularMetricError when |det| < 1e-10 in either block.
MetricInverse invert_metric(const PseudoMetric& G, const Point& pt);

// Metric blocks, their first derivatives and inverses at one point.
struct MetricAt {
  int p = 0, r = 0;
  std::vector<Jet> gh, gv;  // order 1
  Eigen::MatrixXd ghi, gvi;

  double h(int a, int b) const { return gh[a * p + b].value(); }
  double v(int a, int b) const { return gv[a * r + b].value(); }
};

MetricAt metric_at(const PseudoMetric& G, const Point& pt);

struct BlockClassification {
  std::string label;  // "Riemannian", "Minkowski" or "general"
  double max_x_derivative = 0;
  double max_p_derivative = 0;
  int positive = 0, negative = 0;  // eigenvalue sign counts at the first sample
  bool signature_constant = true;
  double min_eigenvalue = 0;
  double max_condition = 0;
};

struct MetricClassification {
  BlockClassification horizontal, vertical;
};

// Riemannian when every momentum derivative is below tol, else Minkowski when
// every x derivative is, else general.
MetricClassification classify(const PseudoMetric& G, int m, const CheckOptions& opt);
CheckReport check_classify(const PseudoMetric& G, int m, const CheckOptions& opt);

// Metric compatible connection built on top of a given one (dlc0).
DistinguishedConnection metrizable_from(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                        const DistinguishedConnection& dlc0, const PseudoMetric& G);
// The same with dlc0 = Berwald.
DistinguishedConnection metrizable_berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                           const PseudoMetric& G);
// Closed form of the Berwald-based construction for metrics independent of p;
// both vertical families vanish.
DistinguishedConnection riemannian_berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                           const PseudoMetric& G);
// Every connection H = H0 + (1/2) g^-1 g_{|0}, V likewise.
DistinguishedConnection metrizable_deformation(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                               const DistinguishedConnection& dlc0, const PseudoMetric& G);

// Obata operators of both blocks at a point:
//   O_h(al, ep, be, ga) = O^{al ep}_{be ga} = (d^al_be d^ep_ga - g_{be ga} g~^{al ep}) / 2
//   O_v(a, e, b, c)     = O^{a e}_{b c}     = (d^a_b d^e_c - g~_{b c} g^{a e}) / 2
// and O* with the opposite sign. Acting on a mixed tensor X^b_e:
//   (O X)^al_ga = O^{al ep}_{be ga} X^be_ep.
struct ObataValues {
  int p = 0, r = 0;
  std::vector<double> O_h, Os_h, O_v, Os_v;

  double Oh(int a, int e, int b, int g) const { return O_h[((a * p + e) * p + b) * p + g]; }
  double Osh(int a, int e, int b, int g) const { return Os_h[((a * p + e) * p + b) * p + g]; }
  double Ov(int a, int e, int b, int c) const { return O_v[((a * r + e) * r + b) * r + c]; }
  double Osv(int a, int e, int b, int c) const { return Os_v[((a * r + e) * r + b) * r + c]; }
};

ObataValues obata_at(const MetricAt& g);
std::function<ObataValues(const Point&)> obata(const PseudoMetric& G);

// Residuals of O + O* = Id, O O = O, O* O* = O*, O O* = 0 over both blocks.
std::array<double, 4> obata_projector_residuals(const ObataValues& o);

// Deformation tensors, stored like connection coefficients (upper, lower, direction):
//   hh(et, ep, ga) = X^et_{ep ga}    vh(et, ep, c) = X^{et c}_ep
//   hv(d, e, ga)   = Y^d_{e ga}      vv(d, e, c)   = Y^{d c}_e
struct DeformationTensors {
  int p = 0, r = 0;
  std::function<DlcValues(const Point&)> eval;

  static DeformationTensors zero(int p, int r);
  static DeformationTensors from_exprs(int p, int r, DlcExprs exprs);
};

// Adds the Obata projection of the deformation to the given coefficients:
//   H^al_{be ga} += O^{al ep}_{et be} X^et_{ep ga}   H^a_{b ga} += O^{a e}_{d b} Y^d_{e ga}
//   V^{al c}_be  += O^{al ep}_{et be} X^{et c}_ep    V^{a c}_b  += O^{a e}_{d b} Y^{d c}_e
void add_obata_deformation(DlcValues& dlc, const ObataValues& o, const DlcValues& deformation);

// The Berwald-based metrizable connection plus an arbitrary Obata deformation.
DistinguishedConnection metrizable_family(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                          const PseudoMetric& G, const DeformationTensors& D);

struct CompatibilityResiduals {
  double gh_h = 0, gv_h = 0, gh_v = 0, gv_v = 0;
  double horizontal() const { return std::max(gh_h, gv_h); }
  double vertical() const { return std::max(gh_v, gv_v); }
};

CompatibilityResiduals compatibility_at(const LocalFrame& f, const DlcValues& dlc, const MetricAt& g);

// g_{ab|c}, g^{ab}_{|c}, g_{ab}|^c and g^{ab}|^c over the sample.
CheckReport check_compatibility(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                const DistinguishedConnection& dlc, const PseudoMetric& G, const CheckOptions& opt,
                                const std::string& name = "compatibility");

}  // namespace dualgeo
