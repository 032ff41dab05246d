#include "dualgeo/hamilton.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dualgeo {

namespace {

// Jet of H (of K*K for Cartan) at the given order.
Jet fundamental_jet(const HamiltonFunction& H, const Point& pt, int order) {
  const Jet j = eval_jet(H.expr, pt, order);
  return H.kind == FunctionKind::Cartan ? j * j : j;
}

Eigen::MatrixXd to_matrix(const std::vector<double>& a, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  return m;
}

}  // namespace

std::vector<double> hessian_metric(const HamiltonFunction& H, const Point& pt, bool half) {
  const Jet j = fundamental_jet(H, pt, 2);
  const int m = pt.m(), r = pt.r();
  const double s = half ? 0.5 : 1.0;
  std::vector<double> out(r * r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) out[a * r + b] = s * j.d(m + a, m + b);
  return out;
}

FieldVec hessian_metric_field(const HamiltonFunction& H, int r, bool half) {
  return FieldVec(r * r, [H, r, half](const Point& pt, int order) {
    if (order + 2 > Jet::kMaxOrder) throw std::invalid_argument("Hessian metric is available up to jet order 1");
    const Jet j = fundamental_jet(H, pt, order + 2);
    const int m = pt.m();
    std::vector<Jet> out;
    out.reserve(r * r);
    for (int a = 0; a < r; ++a) {
      const Jet da = j.partial(m + a);
      for (int b = 0; b < r; ++b) {
        Jet e = da.partial(m + b);
        if (half) e *= 0.5;
        out.push_back(std::move(e));
      }
    }
    return out;
  });
}

CheckReport check_regularity(const HamiltonFunction& H, int m, int r, const CheckOptions& opt, bool half) {
  ResidualTracker tr("regularity");
  tr.family("det-shortfall");
  double min_det = std::numeric_limits<double>::infinity();
  tr.for_each(sample_points(m, r, opt.samples, opt.seed, opt.box), [&](const Point& pt) {
    const double det = std::abs(to_matrix(hessian_metric(H, pt, half), r).determinant());
    min_det = std::min(min_det, det);
    tr.record("det-shortfall", std::max(0.0, opt.tol - det), pt);
  });
  tr.note("min |det| " + format_double(min_det));
  return tr.finish_with(tr.overall_max() == 0.0 && min_det >= opt.tol);
}

CheckReport check_homogeneity(const HamiltonFunction& K, int m, int r, const CheckOptions& opt, bool half) {
  ResidualTracker tr("homogeneity");
  tr.family("euler");
  double min_value = std::numeric_limits<double>::infinity();
  double min_eigen = std::numeric_limits<double>::infinity();
  tr.for_each(sample_points(m, r, opt.samples, opt.seed, opt.box), [&](const Point& pt) {
    const Jet j = eval_jet(K.expr, pt, 1);
    double euler = -j.value();
    for (int a = 0; a < r; ++a) euler += pt.p[a] * j.d(m + a);
    tr.record("euler", std::abs(euler), pt);
    min_value = std::min(min_value, j.value());
    HamiltonFunction squared{K.expr, FunctionKind::Cartan};
    const Eigen::MatrixXd hess = to_matrix(hessian_metric(squared, pt, half), r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hess + hess.transpose()), Eigen::EigenvaluesOnly);
    min_eigen = std::min(min_eigen, es.eigenvalues().minCoeff());
  });
  const bool positive = min_value > 0.0, definite = min_eigen > 0.0;
  tr.note("min K " + format_double(min_value) + (positive ? " (positive)" : " (NOT positive)"));
  tr.note("min Hessian eigenvalue " + format_double(min_eigen) + (definite ? " (positive definite)" : " (NOT positive definite)"));
  return tr.finish_with(tr.overall_max() < opt.tol && positive && definite);
}

PseudoMetric induced_metric(const FieldVec& g_v, int r) { return {r, r, inverse_field(g_v, r), g_v}; }

NormalValues NormalValues::zero(int r) {
  NormalValues n;
  n.r = r;
  n.h.assign(r * r * r, 0.0);
  n.v.assign(r * r * r, 0.0);
  return n;
}

DlcValues normal_to_dlc(const NormalValues& n) {
  DlcValues d = DlcValues::zero(n.r, n.r);
  for (std::size_t k = 0; k < n.h.size(); ++k) {
    d.hh[k] = n.h[k];
    d.hv[k] = -n.h[k];
    d.vv[k] = n.v[k];
    d.vh[k] = -n.v[k];
  }
  return d;
}

DistinguishedConnection NormalConnection::to_dlc() const {
  auto e = eval;
  return DistinguishedConnection(r, r, [e](const Point& pt) { return normal_to_dlc(e(pt)); });
}

NormalConnection levi_civita_normal(const AlgebroidSpec& spec, const NonlinearConnection& conn, const FieldVec& g_v) {
  const DualGeometry geo(spec, conn);
  if (geo.p() != geo.r()) throw std::invalid_argument("the normal connection needs p_rank == r_rank");
  const int r = geo.r();
  const PseudoMetric G = induced_metric(g_v, r);
  return {r, [geo, G, r](const Point& pt) {
            const LocalFrame f = geo.frame(pt);
            const MetricAt g = metric_at(G, pt);  // gh = g~ (lower), gv = g (upper)
            NormalValues n = NormalValues::zero(r);
            for (int a = 0; a < r; ++a)
              for (int b = 0; b < r; ++b)
                for (int c = 0; c < r; ++c) {
                  double sh = 0.0, sv = 0.0;
                  for (int e = 0; e < r; ++e) {
                    double t = f.delta(b, g.gh[e * r + c]) + f.delta(c, g.gh[b * r + e]) - f.delta(e, g.gh[b * r + c]);
                    for (int d = 0; d < r; ++d)
                      t += -g.h(c, d) * f.L_at(d, b, e) + g.h(b, d) * f.L_at(d, e, c) - g.h(e, d) * f.L_at(d, b, c);
                    sh += g.v(a, e) * t;
                    sv += g.h(b, e) * (f.dot(c, g.gv[e * r + a]) + f.dot(a, g.gv[e * r + c]) - f.dot(e, g.gv[a * r + c]));
                  }
                  n.H(a, b, c) = 0.5 * sh;
                  n.V(a, b, c) = 0.5 * sv;
                }
            return n;
          }};
}

TorsionPrescription TorsionPrescription::zero(int r) {
  return {r, std::vector<Expr>(r * r * r), std::vector<Expr>(r * r * r)};
}

void TorsionPrescription::validate(const std::vector<Point>& pts) const {
  const std::size_t n = static_cast<std::size_t>(r) * r * r;
  if (T.size() != n || S.size() != n) throw std::invalid_argument("torsion arrays must be r_rank^3");
  for (const Point& pt : pts) {
    const TorsionValues v = torsion_values(*this, pt);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        for (int c = 0; c < r; ++c) {
          const double t = v.T[(a * r + b) * r + c] + v.T[(a * r + c) * r + b];
          const double s = v.S[(a * r + b) * r + c] + v.S[(c * r + b) * r + a];
          if (std::abs(t) > 1e-12 || std::abs(s) > 1e-12)
            throw std::invalid_argument("torsion prescription is not antisymmetric");
        }
  }
}

double TorsionValues::max_abs_diff(const TorsionValues& o) const {
  double w = 0.0;
  for (std::size_t k = 0; k < T.size(); ++k) w = std::max(w, std::abs(T[k] - o.T[k]));
  for (std::size_t k = 0; k < S.size(); ++k) w = std::max(w, std::abs(S[k] - o.S[k]));
  return w;
}

TorsionValues torsion_values(const TorsionPrescription& P, const Point& pt) {
  TorsionValues v;
  v.r = P.r;
  for (const Expr& e : P.T) v.T.push_back(eval_value(e, pt));
  for (const Expr& e : P.S) v.S.push_back(eval_value(e, pt));
  return v;
}

NormalConnection torsion_family(const NormalConnection& base, const FieldVec& g_v, const TorsionPrescription& P) {
  const int r = base.r;
  if (P.r != r) throw std::invalid_argument("torsion prescription rank does not match the connection");
  const PseudoMetric G = induced_metric(g_v, r);
  return {r, [base, G, P, r](const Point& pt) {
            NormalValues n = base(pt);
            const TorsionValues t = torsion_values(P, pt);
            const MetricAt g = metric_at(G, pt);
            auto T = [&](int a, int b, int c) { return t.T[(a * r + b) * r + c]; };
            auto S = [&](int a, int b, int c) { return t.S[(a * r + b) * r + c]; };  // S^{ac}_b
            for (int a = 0; a < r; ++a)
              for (int b = 0; b < r; ++b)
                for (int c = 0; c < r; ++c) {
                  double sh = 0.0, sv = 0.0;
                  for (int e = 0; e < r; ++e)
                    for (int d = 0; d < r; ++d) {
                      sh += g.v(a, e) * (g.h(e, d) * T(d, b, c) - g.h(b, d) * T(d, e, c) + g.h(c, d) * T(d, b, e));
                      sv += g.h(b, e) * (g.v(e, d) * S(a, d, c) - g.v(a, d) * S(e, d, c) + g.v(c, d) * S(a, d, e));
                    }
                  n.H(a, b, c) += 0.5 * sh;
                  n.V(a, b, c) += 0.5 * sv;
                }
            return n;
          }};
}

TorsionValues torsion_recover_at(const LocalFrame& f, const NormalValues& n) {
  const int r = n.r;
  TorsionValues t;
  t.r = r;
  t.T.resize(r * r * r);
  t.S.resize(r * r * r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        t.T[(a * r + b) * r + c] = n.H(a, b, c) - n.H(a, c, b) + f.L_at(a, b, c);
        t.S[(a * r + b) * r + c] = n.V(a, b, c) - n.V(c, b, a);
      }
  return t;
}

std::function<TorsionValues(const Point&)> torsion_recover(const AlgebroidSpec& spec, const NormalConnection& n) {
  const DualGeometry geo(spec, NonlinearConnection{});
  return [geo, n](const Point& pt) { return torsion_recover_at(geo.frame(pt), n(pt)); };
}

CheckReport check_torsion_roundtrip(const AlgebroidSpec& spec, const NonlinearConnection& conn, const FieldVec& g_v,
                                    const TorsionPrescription& P, const CheckOptions& opt) {
  const DualGeometry geo(spec, conn);
  ResidualTracker tr("torsion-roundtrip");
  const char* fam[] = {"levi-civita-torsion", "roundtrip", "family-compatibility"};
  for (const char* f : fam) tr.family(f);
  const auto pts = sample_points(geo.m(), geo.r(), opt.samples, opt.seed, opt.box);
  P.validate(pts);
  const NormalConnection lc = levi_civita_normal(spec, conn, g_v);
  const NormalConnection fam_conn = torsion_family(lc, g_v, P);
  const PseudoMetric G = induced_metric(g_v, geo.r());
  const TorsionValues zero{geo.r(), std::vector<double>(geo.r() * geo.r() * geo.r()),
                           std::vector<double>(geo.r() * geo.r() * geo.r())};
  tr.for_each(pts, [&](const Point& pt) {
    const LocalFrame f = geo.frame(pt);
    tr.record(fam[0], torsion_recover_at(f, lc(pt)).max_abs_diff(zero), pt);
    const NormalValues nv = fam_conn(pt);
    tr.record(fam[1], torsion_recover_at(f, nv).max_abs_diff(torsion_values(P, pt)), pt);
    const CompatibilityResiduals c = compatibility_at(f, normal_to_dlc(nv), metric_at(G, pt));
    tr.record(fam[2], std::max(c.horizontal(), c.vertical()), pt);
  });
  return tr.finish(opt.tol);
}

TorsionPrescription random_prescription(int r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> T(r * r * r, 0.0), S(r * r * r, 0.0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = b + 1; c < r; ++c) {
        const double t = u(rng), s = u(rng);
        T[(a * r + b) * r + c] = t;
        T[(a * r + c) * r + b] = -t;
        // S^{bc}_a antisymmetric in (b, c): S[(b*r + a)*r + c].
        S[(b * r + a) * r + c] = s;
        S[(c * r + a) * r + b] = -s;
      }
  TorsionPrescription P = TorsionPrescription::zero(r);
  for (std::size_t k = 0; k < T.size(); ++k) {
    P.T[k] = Expr(T[k]);
    P.S[k] = Expr(S[k]);
  }
  return P;
}

}  // namespace dualgeo
