#include "dualgeo/transition.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dualgeo {

ChartTransition ChartTransition::identity(int m, int p, int r) {
  auto eye = [](int n) {
    std::vector<Expr> e(n * n);
    for (int i = 0; i < n; ++i) e[i * n + i] = Expr(1.0);
    return e;
  };
  return {eye(p), eye(r), eye(m)};
}

void ChartTransition::validate(int m, int p, int r) const {
  if (static_cast<int>(Lambda.size()) != p * p) throw std::invalid_argument("Lambda must be p_rank x p_rank");
  if (static_cast<int>(M.size()) != r * r) throw std::invalid_argument("M must be r_rank x r_rank");
  if (static_cast<int>(base_jacobian.size()) != m * m) throw std::invalid_argument("base_jacobian must be m x m");
  for (const auto* block : {&Lambda, &M, &base_jacobian})
    for (const Expr& e : *block)
      if (e.references_p()) throw std::invalid_argument("transition entries may depend on x only");
}

namespace {

double determinant(const std::vector<Jet>& a, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i * n + j].value();
  return n == 0 ? 1.0 : m.determinant();
}

struct TransitionAt {
  int p, r;
  std::vector<Jet> lam, lam_inv, mm, m_inv;

  double Lam(int ap, int a) const { return lam[ap * p + a].value(); }     // Lambda^{a'}_a
  double LamInv(int a, int ap) const { return lam_inv[a * p + ap].value(); }  // Lambda^a_{a'}
  double Mm(int ap, int a) const { return mm[ap * r + a].value(); }       // M^{a'}_a
  double MInv(int a, int ap) const { return m_inv[a * r + ap].value(); }  // M^a_{a'}
};

TransitionAt transition_at(const ChartTransition& t, int m, int p, int r, const Point& pt) {
  TransitionAt out{p, r, FieldVec::from_exprs(t.Lambda)(pt, 1), {}, FieldVec::from_exprs(t.M)(pt, 1), {}};
  const std::vector<Jet> jac = FieldVec::from_exprs(t.base_jacobian)(pt, 0);
  const struct {
    const char* name;
    double det;
  } dets[] = {{"Lambda", determinant(out.lam, p)}, {"M", determinant(out.mm, r)}, {"base_jacobian", determinant(jac, m)}};
  for (const auto& d : dets)
    if (!(std::abs(d.det) >= kMinTransitionDet))
      throw std::domain_error(std::string(d.name) + " is not invertible (|det| = " + format_double(std::abs(d.det)) + ")");
  out.lam_inv = invert_jets(out.lam, p);
  out.m_inv = invert_jets(out.mm, r);
  return out;
}

}  // namespace

std::vector<double> nlc_law(const DualGeometry& geo, const ChartTransition& t, const Point& pt) {
  const int p = geo.p(), r = geo.r();
  const TransitionAt tr = transition_at(t, geo.m(), p, r, pt);
  const LocalFrame f = geo.frame(pt);
  std::vector<double> pp(r, 0.0);  // p_{a'}
  for (int ap = 0; ap < r; ++ap)
    for (int a = 0; a < r; ++a) pp[ap] += tr.MInv(a, ap) * pt.p[a];
  std::vector<double> out(r * p, 0.0);
  for (int bp = 0; bp < r; ++bp)
    for (int gp = 0; gp < p; ++gp) {
      double s = 0.0;
      for (int b = 0; b < r; ++b)
        for (int g = 0; g < p; ++g) {
          double inner = f.gamma_at(b, g);
          for (int ap = 0; ap < r; ++ap) inner -= f.delta(g, tr.mm[ap * r + b]) * pp[ap];
          s += tr.MInv(b, bp) * inner * tr.LamInv(g, gp);
        }
      out[bp * p + gp] = s;
    }
  return out;
}

std::vector<double> nlc_pushforward(const DualGeometry& geo, const ChartTransition& t, const Point& pt) {
  const int p = geo.p(), r = geo.r();
  const TransitionAt tr = transition_at(t, geo.m(), p, r, pt);
  const LocalFrame f = geo.frame(pt);
  // delta_g(p_{b'}) with p_{b'} = M^b_{b'}(x) p_b.
  std::vector<double> dp(r * p, 0.0);
  for (int bp = 0; bp < r; ++bp)
    for (int g = 0; g < p; ++g) {
      double s = 0.0;
      for (int b = 0; b < r; ++b) s += f.delta(g, tr.m_inv[b * r + bp]) * pt.p[b] + f.gamma_at(b, g) * tr.MInv(b, bp);
      dp[bp * p + g] = s;
    }
  std::vector<double> out(r * p, 0.0);
  for (int bp = 0; bp < r; ++bp)
    for (int gp = 0; gp < p; ++gp)
      for (int g = 0; g < p; ++g) out[bp * p + gp] += tr.LamInv(g, gp) * dp[bp * p + g];
  return out;
}

DlcValues dlc_law(const DualGeometry& geo, const DlcValues& d, const ChartTransition& t, const Point& pt) {
  const int p = geo.p(), r = geo.r();
  const TransitionAt tr = transition_at(t, geo.m(), p, r, pt);
  const LocalFrame f = geo.frame(pt);
  DlcValues out = DlcValues::zero(p, r);

  for (int ap = 0; ap < p; ++ap)
    for (int bp = 0; bp < p; ++bp)
      for (int gp = 0; gp < p; ++gp) {
        double s = 0.0;
        for (int a = 0; a < p; ++a)
          for (int g = 0; g < p; ++g) {
            double inner = f.delta(g, tr.lam_inv[a * p + bp]);
            for (int b = 0; b < p; ++b) inner += d.Hh(a, b, g) * tr.LamInv(b, bp);
            s += tr.Lam(ap, a) * inner * tr.LamInv(g, gp);
          }
        out.Hh(ap, bp, gp) = s;
      }

  for (int ap = 0; ap < r; ++ap)
    for (int bp = 0; bp < r; ++bp)
      for (int gp = 0; gp < p; ++gp) {
        double s = 0.0;
        for (int a = 0; a < r; ++a)
          for (int g = 0; g < p; ++g) {
            double inner = f.delta(g, tr.m_inv[a * r + bp]);
            for (int b = 0; b < r; ++b) inner += d.Hv(a, b, g) * tr.MInv(b, bp);
            s += tr.Mm(ap, a) * inner * tr.LamInv(g, gp);
          }
        out.Hv(ap, bp, gp) = s;
      }

  for (int ap = 0; ap < p; ++ap)
    for (int bp = 0; bp < p; ++bp)
      for (int cp = 0; cp < r; ++cp) {
        double s = 0.0;
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b)
            for (int c = 0; c < r; ++c) s += tr.Lam(ap, a) * d.Vh(a, b, c) * tr.LamInv(b, bp) * tr.Mm(cp, c);
        out.Vh(ap, bp, cp) = s;
      }

  for (int ap = 0; ap < r; ++ap)
    for (int bp = 0; bp < r; ++bp)
      for (int cp = 0; cp < r; ++cp) {
        double s = 0.0;
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) s += tr.Mm(ap, a) * d.Vv(a, b, c) * tr.MInv(b, bp) * tr.Mm(cp, c);
        out.Vv(ap, bp, cp) = s;
      }
  return out;
}

DlcValues dlc_frame_route(const DualGeometry& geo, const DlcValues& d, const ChartTransition& t, const Point& pt) {
  const int p = geo.p(), r = geo.r();
  const TransitionAt tr = transition_at(t, geo.m(), p, r, pt);
  const LocalFrame f = geo.frame(pt);
  DlcValues out = DlcValues::zero(p, r);
  const Valence vector_h{1, 0, 0, 0};  // X^a delta_a
  const Valence covector_v{0, 0, 0, 1};  // X_b d.^b

  // delta_{b'} = Lambda^a_{b'} delta_a, one primed vector at a time.
  for (int bp = 0; bp < p; ++bp) {
    std::vector<Jet> X;
    for (int a = 0; a < p; ++a) X.push_back(tr.lam_inv[a * p + bp]);
    for (int g = 0; g < p; ++g) {
      const std::vector<double> dX = h_cov_deriv_at(f, d, vector_h, X, g);
      for (int ap = 0; ap < p; ++ap) {
        double s = 0.0;
        for (int a = 0; a < p; ++a) s += tr.Lam(ap, a) * dX[a];
        for (int gp = 0; gp < p; ++gp) out.Hh(ap, bp, gp) += s * tr.LamInv(g, gp);
      }
    }
    for (int c = 0; c < r; ++c) {
      const std::vector<double> dX = v_cov_deriv_at(f, d, vector_h, X, c);
      for (int ap = 0; ap < p; ++ap) {
        double s = 0.0;
        for (int a = 0; a < p; ++a) s += tr.Lam(ap, a) * dX[a];
        for (int cp = 0; cp < r; ++cp) out.Vh(ap, bp, cp) += s * tr.Mm(cp, c);
      }
    }
  }

  // d.^{a'} = M^{a'}_b d.^b; its covariant derivative re-expanded via d.^b = M^b_{b'} d.^{b'}.
  for (int ap = 0; ap < r; ++ap) {
    std::vector<Jet> X;
    for (int b = 0; b < r; ++b) X.push_back(tr.mm[ap * r + b]);
    for (int g = 0; g < p; ++g) {
      const std::vector<double> dX = h_cov_deriv_at(f, d, covector_v, X, g);
      for (int bp = 0; bp < r; ++bp) {
        double s = 0.0;
        for (int b = 0; b < r; ++b) s += dX[b] * tr.MInv(b, bp);
        for (int gp = 0; gp < p; ++gp) out.Hv(ap, bp, gp) += s * tr.LamInv(g, gp);
      }
    }
    for (int c = 0; c < r; ++c) {
      const std::vector<double> dX = v_cov_deriv_at(f, d, covector_v, X, c);
      for (int bp = 0; bp < r; ++bp) {
        double s = 0.0;
        for (int b = 0; b < r; ++b) s += dX[b] * tr.MInv(b, bp);
        for (int cp = 0; cp < r; ++cp) out.Vv(ap, bp, cp) += s * tr.Mm(cp, c);
      }
    }
  }
  return out;
}

namespace {

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double w = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) w = std::max(w, std::abs(a[k] - b[k]));
  return w;
}

}  // namespace

CheckReport check_nlc_law(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                          const std::vector<ChartTransition>& transitions, const CheckOptions& opt) {
  const DualGeometry geo(spec, conn);
  ResidualTracker tr("nlc-law");
  tr.family("law-vs-pushforward");
  if (transitions.empty()) tr.note("no transitions given");
  for (const ChartTransition& t : transitions) t.validate(geo.m(), geo.p(), geo.r());
  const auto pts = sample_points(geo.m(), geo.r(), opt.samples, opt.seed, opt.box);
  tr.for_each(pts, [&](const Point& pt) {
    for (const ChartTransition& t : transitions)
      tr.record("law-vs-pushforward", max_diff(nlc_law(geo, t, pt), nlc_pushforward(geo, t, pt)), pt);
  });
  tr.note(std::to_string(transitions.size()) + " transition(s)");
  return tr.finish(opt.tol);
}

CheckReport check_dlc_law(const AlgebroidSpec& spec, const NonlinearConnection& conn,
                          const DistinguishedConnection& dlc, const std::vector<ChartTransition>& transitions,
                          const CheckOptions& opt) {
  const DualGeometry geo(spec, conn);
  ResidualTracker tr("dlc-law");
  for (const char* f : {"Hh", "Hv", "Vh", "Vv"}) tr.family(f);
  if (transitions.empty()) tr.note("no transitions given");
  for (const ChartTransition& t : transitions) t.validate(geo.m(), geo.p(), geo.r());
  const auto pts = sample_points(geo.m(), geo.r(), opt.samples, opt.seed, opt.box);
  tr.for_each(pts, [&](const Point& pt) {
    const DlcValues d = dlc(pt);
    for (const ChartTransition& t : transitions) {
      const DlcValues a = dlc_law(geo, d, t, pt), b = dlc_frame_route(geo, d, t, pt);
      tr.record("Hh", max_diff(a.hh, b.hh), pt);
      tr.record("Hv", max_diff(a.hv, b.hv), pt);
      tr.record("Vh", max_diff(a.vh, b.vh), pt);
      tr.record("Vv", max_diff(a.vv, b.vv), pt);
    }
  });
  tr.note(std::to_string(transitions.size()) + " transition(s)");
  return tr.finish(opt.tol);
}

}  // namespace dualgeo
