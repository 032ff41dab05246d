#include "dualgeo/metric.hpp"

#include <cmath>
#include <limits>

namespace dualgeo {

PseudoMetric PseudoMetric::from_exprs(int p, int r, std::vector<Expr> g_h, std::vector<Expr> g_v) {
  if (static_cast<int>(g_h.size()) != p * p) throw std::invalid_argument("g_h must be p_rank x p_rank");
  if (static_cast<int>(g_v.size()) != r * r) throw std::invalid_argument("g_v must be r_rank x r_rank");
  return {p, r, FieldVec::from_exprs(std::move(g_h)), FieldVec::from_exprs(std::move(g_v))};
}

SingularMetricError::SingularMetricError(const std::string& block, double det, double condition)
    : std::domain_error(block + " metric block is degenerate: |det| = " + format_double(std::abs(det)) +
                        ", condition estimate " + format_double(condition)),
      det_(det),
      condition_(condition) {}

namespace {

Eigen::MatrixXd to_matrix(const std::vector<Jet>& a, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i * n + j].value();
  return m;
}

double condition_number(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : s(0) / lo;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* block, double& det, double& cond) {
  det = m.rows() == 0 ? 1.0 : m.determinant();
  cond = condition_number(m);
  if (!(std::abs(det) >= kMinMetricDet)) throw SingularMetricError(block, det, cond);
  return m.inverse();
}

}  // namespace

MetricInverse invert_metric(const PseudoMetric& G, const Point& pt) {
  MetricInverse out;
  out.h_inv = checked_inverse(to_matrix(G.g_h(pt, 0), G.p), "horizontal", out.det_h, out.cond_h);
  out.v_inv = checked_inverse(to_matrix(G.g_v(pt, 0), G.r), "vertical", out.det_v, out.cond_v);
  return out;
}

MetricAt metric_at(const PseudoMetric& G, const Point& pt) {
  MetricAt g;
  g.p = G.p;
  g.r = G.r;
  g.gh = G.g_h(pt, 1);
  g.gv = G.g_v(pt, 1);
  double det = 0, cond = 0;
  g.ghi = checked_inverse(to_matrix(g.gh, g.p), "horizontal", det, cond);
  g.gvi = checked_inverse(to_matrix(g.gv, g.r), "vertical", det, cond);
  return g;
}

// ------------------------------------------------------------- classification

MetricClassification classify(const PseudoMetric& G, int m, const CheckOptions& opt) {
  MetricClassification out;
  const auto pts = sample_points(m, G.r, opt.samples, opt.seed, opt.box);
  auto scan = [&](const FieldVec& block, int n, BlockClassification& bc) {
    bool first = true;
    bc.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const Point& pt : pts) {
      const std::vector<Jet> g = block(pt, 1);
      for (const Jet& j : g) {
        for (int i = 0; i < m; ++i) bc.max_x_derivative = std::max(bc.max_x_derivative, std::abs(j.d(i)));
        for (int a = 0; a < pt.r(); ++a) bc.max_p_derivative = std::max(bc.max_p_derivative, std::abs(j.d(m + a)));
      }
      const Eigen::MatrixXd mat = to_matrix(g, n);
      const Eigen::MatrixXd sym = 0.5 * (mat + mat.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
      int pos = 0, neg = 0;
      for (int k = 0; k < n; ++k) {
        const double ev = es.eigenvalues()(k);
        if (ev > 0) ++pos;
        if (ev < 0) ++neg;
        bc.min_eigenvalue = std::min(bc.min_eigenvalue, ev);
      }
      if (first) {
        bc.positive = pos;
        bc.negative = neg;
        first = false;
      } else if (pos != bc.positive || neg != bc.negative) {
        bc.signature_constant = false;
      }
      bc.max_condition = std::max(bc.max_condition, condition_number(mat));
    }
    if (bc.max_p_derivative < opt.tol)
      bc.label = "Riemannian";
    else if (bc.max_x_derivative < opt.tol)
      bc.label = "Minkowski";
    else
      bc.label = "general";
  };
  scan(G.g_h, G.p, out.horizontal);
  scan(G.g_v, G.r, out.vertical);
  return out;
}

CheckReport check_classify(const PseudoMetric& G, int m, const CheckOptions& opt) {
  const MetricClassification c = classify(G, m, opt);
  ResidualTracker tr("classify");
  auto describe = [](const char* name, const BlockClassification& b) {
    return std::string(name) + " " + b.label + " (signature +" + std::to_string(b.positive) + "/-" +
           std::to_string(b.negative) + (b.signature_constant ? ", constant" : ", NOT constant") +
           ", max |d/dx| " + format_double(b.max_x_derivative) + ", max |d/dp| " + format_double(b.max_p_derivative) +
           ", min eigenvalue " + format_double(b.min_eigenvalue) + ")";
  };
  tr.note(describe("horizontal", c.horizontal));
  tr.note(describe("vertical", c.vertical));
  for (const auto* b : {&c.horizontal, &c.vertical})
    if (b->max_condition > kConditionWarning)
      tr.note("warning: condition number " + format_double(b->max_condition) + " exceeds 1e8");
  const bool ok = c.horizontal.signature_constant && c.vertical.signature_constant &&
                  c.horizontal.positive + c.horizontal.negative == G.p &&
                  c.vertical.positive + c.vertical.negative == G.r;
  CheckReport rep = tr.finish_with(ok);
  rep.samples_used = opt.samples;
  return rep;
}

// ---------------------------------------------------------------- constructions

namespace {

const Valence kLowerHorizontalPair{0, 0, 2, 0};
const Valence kUpperVerticalPair{0, 2, 0, 0};

struct Inputs {
  LocalFrame frame;
  MetricAt g;
};

// The Christoffel-type horizontal family shared by every construction; `d`
// is the derivative used along frame direction k.
template <class Deriv>
void horizontal_christoffel(DlcValues& out, const LocalFrame& f, const MetricAt& g, Deriv d) {
  const int p = g.p;
  std::vector<double> dg(p * p * p);  // dg[(k*p + a)*p + b] = d_k g_{ab}
  for (int k = 0; k < p; ++k)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) dg[(k * p + a) * p + b] = d(k, g.gh[a * p + b]);
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be)
      for (int ga = 0; ga < p; ++ga) {
        double s = 0.0;
        for (int ep = 0; ep < p; ++ep) {
          double t = dg[(ga * p + ep) * p + be] + dg[(be * p + ep) * p + ga] - dg[(ep * p + be) * p + ga];
          for (int th = 0; th < p; ++th)
            t += g.h(th, ep) * f.L_at(th, ga, be) - g.h(be, th) * f.L_at(th, ga, ep) - g.h(th, ga) * f.L_at(th, be, ep);
          s += g.ghi(al, ep) * t;
        }
        out.Hh(al, be, ga) = 0.5 * s;
      }
}

void vertical_christoffel(DlcValues& out, const LocalFrame& f, const MetricAt& g) {
  const int r = g.r;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        double s = 0.0;
        for (int e = 0; e < r; ++e)
          s += g.gvi(b, e) * (f.dot(c, g.gv[e * r + a]) + f.dot(a, g.gv[e * r + c]) - f.dot(e, g.gv[a * r + c]));
        out.Vv(a, b, c) = 0.5 * s;
      }
}

// H^a_{b g} = H0^a_{b g} + (1/2) g~_{be} g^{ea}_{0|g}.
void vertical_block_h(DlcValues& out, const LocalFrame& f, const MetricAt& g, const DlcValues& d0) {
  const int p = g.p, r = g.r;
  for (int ga = 0; ga < p; ++ga) {
    const std::vector<double> dg = h_cov_deriv_at(f, d0, kUpperVerticalPair, g.gv, ga);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        double s = 0.0;
        for (int e = 0; e < r; ++e) s += g.gvi(b, e) * dg[e * r + a];
        out.Hv(a, b, ga) = d0.Hv(a, b, ga) + 0.5 * s;
      }
  }
}

// V^{al c}_be = V0^{al c}_be + (1/2) g~^{al ep} g_{ep be}0|^c.
void horizontal_block_v(DlcValues& out, const LocalFrame& f, const MetricAt& g, const DlcValues& d0) {
  const int p = g.p, r = g.r;
  for (int c = 0; c < r; ++c) {
    const std::vector<double> dg = v_cov_deriv_at(f, d0, kLowerHorizontalPair, g.gh, c);
    for (int al = 0; al < p; ++al)
      for (int be = 0; be < p; ++be) {
        double s = 0.0;
        for (int ep = 0; ep < p; ++ep) s += g.ghi(al, ep) * dg[ep * p + be];
        out.Vh(al, be, c) = d0.Vh(al, be, c) + 0.5 * s;
      }
  }
}

DlcValues metrizable_from_at(const LocalFrame& f, const MetricAt& g, const DlcValues& d0) {
  DlcValues out = DlcValues::zero(g.p, g.r);
  horizontal_christoffel(out, f, g, [&](int k, const Jet& j) { return f.delta(k, j); });
  vertical_block_h(out, f, g, d0);
  horizontal_block_v(out, f, g, d0);
  vertical_christoffel(out, f, g);
  return out;
}

}  // namespace

DistinguishedConnection metrizable_from(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                        const DistinguishedConnection& dlc0, const PseudoMetric& G) {
  const DualGeometry geo(spec, conn);
  return DistinguishedConnection(geo.p(), geo.r(), [=](const Point& pt) {
    return metrizable_from_at(geo.frame(pt), metric_at(G, pt), dlc0(pt));
  });
}

DistinguishedConnection metrizable_berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                           const PseudoMetric& G) {
  return metrizable_from(spec, conn, berwald(spec, conn), G);
}

DistinguishedConnection riemannian_berwald(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                           const PseudoMetric& G) {
  const DualGeometry geo(spec, conn);
  return DistinguishedConnection(geo.p(), geo.r(), [=](const Point& pt) {
    const LocalFrame f = geo.frame(pt);
    const MetricAt g = metric_at(G, pt);
    const std::vector<Jet> gamma = geo.gamma_jets(pt, 1);
    const int m = f.m, p = f.p, r = f.r;
    auto dgam = [&](int b, int ga, int a) { return gamma[b * p + ga].d(m + a); };  // dGamma_{b ga}/dp_a
    auto rho_d = [&](int k, const Jet& j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += f.rho_at(k, i) * j.d(i);
      return s;
    };
    DlcValues out = DlcValues::zero(p, r);
    horizontal_christoffel(out, f, g, rho_d);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int ga = 0; ga < p; ++ga) {
          double s = 0.0;
          for (int e = 0; e < r; ++e) {
            double t = rho_d(ga, g.gv[e * r + a]);
            for (int d = 0; d < r; ++d) t -= dgam(d, ga, e) * g.v(d, a) + dgam(d, ga, a) * g.v(e, d);
            s += g.gvi(b, e) * t;
          }
          out.Hv(a, b, ga) = dgam(b, ga, a) + 0.5 * s;
        }
    return out;
  });
}

DistinguishedConnection metrizable_deformation(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                               const DistinguishedConnection& dlc0, const PseudoMetric& G) {
  const DualGeometry geo(spec, conn);
  return DistinguishedConnection(geo.p(), geo.r(), [=](const Point& pt) {
    const LocalFrame f = geo.frame(pt);
    const MetricAt g = metric_at(G, pt);
    const DlcValues d0 = dlc0(pt);
    const int p = g.p, r = g.r;
    DlcValues out = DlcValues::zero(p, r);
    for (int ga = 0; ga < p; ++ga) {
      const std::vector<double> dg = h_cov_deriv_at(f, d0, kLowerHorizontalPair, g.gh, ga);
      for (int al = 0; al < p; ++al)
        for (int be = 0; be < p; ++be) {
          double s = 0.0;
          for (int ep = 0; ep < p; ++ep) s += g.ghi(al, ep) * dg[ep * p + be];
          out.Hh(al, be, ga) = d0.Hh(al, be, ga) + 0.5 * s;
        }
    }
    vertical_block_h(out, f, g, d0);
    horizontal_block_v(out, f, g, d0);
    for (int c = 0; c < r; ++c) {
      const std::vector<double> dg = v_cov_deriv_at(f, d0, kUpperVerticalPair, g.gv, c);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
          double s = 0.0;
          for (int e = 0; e < r; ++e) s += g.gvi(b, e) * dg[e * r + a];
          out.Vv(a, b, c) = d0.Vv(a, b, c) + 0.5 * s;
        }
    }
    return out;
  });
}

// ------------------------------------------------------------------- Obata

ObataValues obata_at(const MetricAt& g) {
  const int p = g.p, r = g.r;
  ObataValues o;
  o.p = p;
  o.r = r;
  o.O_h.resize(p * p * p * p);
  o.Os_h.resize(p * p * p * p);
  o.O_v.resize(r * r * r * r);
  o.Os_v.resize(r * r * r * r);
  for (int a = 0; a < p; ++a)
    for (int e = 0; e < p; ++e)
      for (int b = 0; b < p; ++b)
        for (int c = 0; c < p; ++c) {
          const double id = (a == b && e == c) ? 1.0 : 0.0;
          const double tr = g.h(b, c) * g.ghi(a, e);
          o.O_h[((a * p + e) * p + b) * p + c] = 0.5 * (id - tr);
          o.Os_h[((a * p + e) * p + b) * p + c] = 0.5 * (id + tr);
        }
  for (int a = 0; a < r; ++a)
    for (int e = 0; e < r; ++e)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          const double id = (a == b && e == c) ? 1.0 : 0.0;
          const double tr = g.gvi(b, c) * g.v(a, e);
          o.O_v[((a * r + e) * r + b) * r + c] = 0.5 * (id - tr);
          o.Os_v[((a * r + e) * r + b) * r + c] = 0.5 * (id + tr);
        }
  return o;
}

std::function<ObataValues(const Point&)> obata(const PseudoMetric& G) {
  return [G](const Point& pt) { return obata_at(metric_at(G, pt)); };
}

namespace {

// The operator X^b_e -> O^{a e}_{b g} X^b_e as an n^2 x n^2 matrix with row
// (a, g) and column (b, e).
Eigen::MatrixXd operator_matrix(const std::vector<double>& O, int n) {
  Eigen::MatrixXd A(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e)
      for (int b = 0; b < n; ++b)
        for (int g = 0; g < n; ++g) A(a * n + g, b * n + e) = O[((a * n + e) * n + b) * n + g];
  return A;
}

}  // namespace

std::array<double, 4> obata_projector_residuals(const ObataValues& o) {
  std::array<double, 4> res{};
  for (const auto& [O, Os, n] : {std::tuple{&o.O_h, &o.Os_h, o.p}, std::tuple{&o.O_v, &o.Os_v, o.r}}) {
    if (n == 0) continue;
    const Eigen::MatrixXd A = operator_matrix(*O, n), B = operator_matrix(*Os, n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n * n, n * n);
    res[0] = std::max(res[0], (A + B - I).cwiseAbs().maxCoeff());
    res[1] = std::max(res[1], (A * A - A).cwiseAbs().maxCoeff());
    res[2] = std::max(res[2], (B * B - B).cwiseAbs().maxCoeff());
    res[3] = std::max(res[3], (A * B).cwiseAbs().maxCoeff());
  }
  return res;
}

DeformationTensors DeformationTensors::zero(int p, int r) {
  return {p, r, [p, r](const Point&) { return DlcValues::zero(p, r); }};
}

DeformationTensors DeformationTensors::from_exprs(int p, int r, DlcExprs exprs) {
  const DistinguishedConnection as_values = DistinguishedConnection::from_exprs(p, r, std::move(exprs));
  return {p, r, [as_values](const Point& pt) { return as_values(pt); }};
}

void add_obata_deformation(DlcValues& d, const ObataValues& o, const DlcValues& X) {
  const int p = o.p, r = o.r;
  for (int al = 0; al < p; ++al)
    for (int be = 0; be < p; ++be) {
      for (int ga = 0; ga < p; ++ga) {
        double s = 0.0;
        for (int et = 0; et < p; ++et)
          for (int ep = 0; ep < p; ++ep) s += o.Oh(al, ep, et, be) * X.Hh(et, ep, ga);
        d.Hh(al, be, ga) += s;
      }
      for (int c = 0; c < r; ++c) {
        double s = 0.0;
        for (int et = 0; et < p; ++et)
          for (int ep = 0; ep < p; ++ep) s += o.Oh(al, ep, et, be) * X.Vh(et, ep, c);
        d.Vh(al, be, c) += s;
      }
    }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      for (int ga = 0; ga < p; ++ga) {
        double s = 0.0;
        for (int dd = 0; dd < r; ++dd)
          for (int e = 0; e < r; ++e) s += o.Ov(a, e, dd, b) * X.Hv(dd, e, ga);
        d.Hv(a, b, ga) += s;
      }
      for (int c = 0; c < r; ++c) {
        double s = 0.0;
        for (int dd = 0; dd < r; ++dd)
          for (int e = 0; e < r; ++e) s += o.Ov(a, e, dd, b) * X.Vv(dd, e, c);
        d.Vv(a, b, c) += s;
      }
    }
}

DistinguishedConnection metrizable_family(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                          const PseudoMetric& G, const DeformationTensors& D) {
  const DistinguishedConnection canonical = metrizable_berwald(spec, conn, G);
  return DistinguishedConnection(canonical.p(), canonical.r(), [=](const Point& pt) {
    DlcValues out = canonical(pt);
    add_obata_deformation(out, obata_at(metric_at(G, pt)), D.eval(pt));
    return out;
  });
}

// --------------------------------------------------------------- compatibility

CompatibilityResiduals compatibility_at(const LocalFrame& f, const DlcValues& dlc, const MetricAt& g) {
  CompatibilityResiduals res;
  auto worst = [](const std::vector<double>& v) {
    double w = 0.0;
    for (double x : v) w = std::max(w, std::abs(x));
    return w;
  };
  for (int ga = 0; ga < f.p; ++ga) {
    res.gh_h = std::max(res.gh_h, worst(h_cov_deriv_at(f, dlc, kLowerHorizontalPair, g.gh, ga)));
    res.gv_h = std::max(res.gv_h, worst(h_cov_deriv_at(f, dlc, kUpperVerticalPair, g.gv, ga)));
  }
  for (int c = 0; c < f.r; ++c) {
    res.gh_v = std::max(res.gh_v, worst(v_cov_deriv_at(f, dlc, kLowerHorizontalPair, g.gh, c)));
    res.gv_v = std::max(res.gv_v, worst(v_cov_deriv_at(f, dlc, kUpperVerticalPair, g.gv, c)));
  }
  return res;
}

CheckReport check_compatibility(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                                const DistinguishedConnection& dlc, const PseudoMetric& G, const CheckOptions& opt,
                                const std::string& name) {
  const DualGeometry geo(spec, conn);
  ResidualTracker tr(name);
  const char* fam[] = {"g_h|h", "g_v|h", "g_h|v", "g_v|v"};
  for (const char* f : fam) tr.family(f);
  double worst_cond = 0.0;
  const auto pts = sample_points(geo.m(), geo.r(), opt.samples, opt.seed, opt.box);
  tr.for_each(pts, [&](const Point& pt) {
    const MetricInverse inv = invert_metric(G, pt);
    worst_cond = std::max({worst_cond, inv.cond_h, inv.cond_v});
    const CompatibilityResiduals r = compatibility_at(geo.frame(pt), dlc(pt), metric_at(G, pt));
    tr.record(fam[0], r.gh_h, pt);
    tr.record(fam[1], r.gv_h, pt);
    tr.record(fam[2], r.gh_v, pt);
    tr.record(fam[3], r.gv_v, pt);
  });
  const double h = std::max(tr.family_max(fam[0]), tr.family_max(fam[1]));
  const double v = std::max(tr.family_max(fam[2]), tr.family_max(fam[3]));
  if (h < opt.tol && v < opt.tol)
    tr.note("metrizable");
  else if (h < opt.tol)
    tr.note("H-metrizable only");
  else if (v < opt.tol)
    tr.note("V-metrizable only");
  else
    tr.note("not metrizable");
  if (worst_cond > kConditionWarning) tr.note("warning: metric condition number " + format_double(worst_cond));
  return tr.finish(opt.tol);
}

}  // namespace dualgeo
