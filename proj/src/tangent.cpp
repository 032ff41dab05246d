#include "dualgeo/tangent.hpp"

#include <cmath>
#include <stdexcept>

namespace dualgeo {

TangentVectorValue anchor_image(const AlgebroidSpec& spec, const TangentSection& X, const Point& pt) {
  const AlgebroidSpec c = spec.composed();
  const std::vector<double> z = X.Z.values(pt), y = X.Y.values(pt);
  TangentVectorValue out;
  out.dx.assign(c.m, 0.0);
  for (int i = 0; i < c.m; ++i)
    for (int a = 0; a < c.p_rank; ++a) {
      if (z[a] == 0.0) continue;
      out.dx[i] += z[a] * eval_value(c.rho_at(a, i), pt);
    }
  out.dp = y;
  return out;
}

namespace {

// V(f) at order k for the anchored field V = (rho Z) d/dx + Y d/dp, with the
// coefficient jets at order k and f at order k+1.
Jet derivation(int m, int r, const std::vector<Jet>& vx, const std::vector<Jet>& vp, const Jet& f, int order) {
  Jet out(f.dim(), order);
  for (int i = 0; i < m; ++i) out.add_product(vx[i], f.partial(i));
  for (int a = 0; a < r; ++a) out.add_product(vp[a], f.partial(m + a));
  return out;
}

std::vector<Jet> anchored_x(int m, int p, const std::vector<Jet>& rho, const std::vector<Jet>& Z, int order) {
  const int n = Z.empty() ? 0 : Z[0].dim();
  std::vector<Jet> vx(m, Jet(n, order));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < p; ++a) vx[i].add_product(rho[a * m + i], Z[a]);
  return vx;
}

std::vector<Jet> truncate_all(const std::vector<Jet>& v, int order) {
  std::vector<Jet> out;
  for (const Jet& j : v) out.push_back(j.truncated(order));
  return out;
}

}  // namespace

TangentJets bracket_tangent_at(int m, int p, int r, const std::vector<Jet>& rho, const std::vector<Jet>& L,
                               const TangentJets& X1, const TangentJets& X2, int order) {
  TangentJets out;
  out.Z = bracket_at(m, p, rho, L, X1.Z, X2.Z, order);
  const std::vector<Jet> v1x = anchored_x(m, p, rho, X1.Z, order), v2x = anchored_x(m, p, rho, X2.Z, order);
  const std::vector<Jet> v1p = truncate_all(X1.Y, order), v2p = truncate_all(X2.Y, order);
  for (int b = 0; b < r; ++b)
    out.Y.push_back(derivation(m, r, v1x, v1p, X2.Y[b], order) - derivation(m, r, v2x, v2p, X1.Y[b], order));
  return out;
}

TangentSection bracket_tangent(const AlgebroidSpec& spec, const TangentSection& X1, const TangentSection& X2) {
  const AlgebroidSpec c = spec.composed();
  const int m = c.m, p = c.p_rank, r = c.r_rank;
  const FieldVec rho = FieldVec::from_exprs(c.rho), L = FieldVec::from_exprs(c.L);
  // Both parts come from one evaluation; each output field evaluates it and keeps its half.
  auto both = [=](const Point& pt, int order) {
    if (order + 1 > Jet::kMaxOrder) throw std::invalid_argument("bracket needs one extra jet order");
    TangentJets a{X1.Z(pt, order + 1), X1.Y(pt, order + 1)};
    TangentJets b{X2.Z(pt, order + 1), X2.Y(pt, order + 1)};
    return bracket_tangent_at(m, p, r, rho(pt, order), L(pt, order), a, b, order);
  };
  TangentSection out;
  out.Z = FieldVec(p, [both](const Point& pt, int order) { return both(pt, order).Z; });
  out.Y = FieldVec(r, [both](const Point& pt, int order) { return both(pt, order).Y; });
  return out;
}

Section project_pi_bang(const TangentSection& X) { return X.Z; }

TangentSection vertical_inclusion(const AlgebroidSpec& spec, const FieldVec& Y) {
  return TangentSection{FieldVec::zero(spec.p_rank), Y};
}

CheckReport check_tangent(const AlgebroidSpec& spec, const CheckOptions& opt) {
  spec.validate();
  const AlgebroidSpec c = spec.composed();
  const int m = c.m, p = c.p_rank, r = c.r_rank;
  const FieldVec rho = FieldVec::from_exprs(c.rho), L = FieldVec::from_exprs(c.L);

  std::vector<std::pair<std::vector<Expr>, std::vector<Expr>>> family;
  auto add = [&](int slot_z, int slot_y, const Expr& e) {
    std::vector<Expr> z(p), y(r);
    if (slot_z >= 0) z[slot_z] = e;
    if (slot_y >= 0) y[slot_y] = e;
    family.emplace_back(z, y);
  };
  for (int a = 0; a < p; ++a) add(a, -1, Expr(1.0));
  for (int a = 0; a < r; ++a) add(-1, a, Expr(1.0));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < p; ++a) add(a, -1, Expr::x(i + 1));
  for (int b = 0; b < r; ++b)
    for (int a = 0; a < r; ++a) add(-1, a, Expr::p(b + 1));
  std::vector<TangentSection> sections;
  for (auto& [z, y] : family) sections.push_back({FieldVec::from_exprs(z), FieldVec::from_exprs(y)});
  const int F = static_cast<int>(sections.size());

  ResidualTracker tr("tangent-jacobi");
  for (const char* f : {"jacobi", "anchor-homomorphism", "projection-exactness"}) tr.family(f);
  const auto pts = sample_points(m, r, opt.samples, opt.seed, opt.box);
  tr.for_each(pts, [&](const Point& pt) {
    const std::vector<Jet> rho1 = rho(pt, 1), L1 = L(pt, 1);
    const std::vector<Jet> rho0 = truncate_all(rho1, 0), L0 = truncate_all(L1, 0);

    std::vector<TangentJets> s2, s1;
    for (const TangentSection& s : sections) {
      s2.push_back({s.Z(pt, 2), s.Y(pt, 2)});
      s1.push_back({truncate_all(s2.back().Z, 1), truncate_all(s2.back().Y, 1)});
    }
    auto neg = [](const TangentJets& t) {
      TangentJets o;
      for (const Jet& j : t.Z) o.Z.push_back(-j);
      for (const Jet& j : t.Y) o.Y.push_back(-j);
      return o;
    };
    std::vector<TangentJets> br(F * F);
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j) {
        br[i * F + j] = bracket_tangent_at(m, p, r, rho1, L1, s2[i], s2[j], 1);
        br[j * F + i] = neg(br[i * F + j]);
      }

    double jac = 0.0;
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j)
        for (int k = j + 1; k < F; ++k) {
          const TangentJets t1 = bracket_tangent_at(m, p, r, rho0, L0, br[i * F + j], s1[k], 0);
          const TangentJets t2 = bracket_tangent_at(m, p, r, rho0, L0, br[j * F + k], s1[i], 0);
          const TangentJets t3 = bracket_tangent_at(m, p, r, rho0, L0, br[k * F + i], s1[j], 0);
          for (int g = 0; g < p; ++g)
            jac = std::max(jac, std::abs(t1.Z[g].value() + t2.Z[g].value() + t3.Z[g].value()));
          for (int b = 0; b < r; ++b)
            jac = std::max(jac, std::abs(t1.Y[b].value() + t2.Y[b].value() + t3.Y[b].value()));
        }
    tr.record("jacobi", jac, pt);

    // Anchor of the bracket against the commutator of anchored fields,
    // applied to every coordinate function.
    double hom = 0.0;
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j) {
        const TangentJets& b = br[i * F + j];
        const std::vector<Jet> v1x = anchored_x(m, p, rho1, s1[i].Z, 1);
        const std::vector<Jet> v2x = anchored_x(m, p, rho1, s1[j].Z, 1);
        const std::vector<Jet> v1x0 = truncate_all(v1x, 0), v2x0 = truncate_all(v2x, 0);
        const std::vector<Jet> y10 = truncate_all(s1[i].Y, 0), y20 = truncate_all(s1[j].Y, 0);
        for (int k = 0; k < m; ++k) {
          double image = 0.0;
          for (int g = 0; g < p; ++g) image += rho0[g * m + k].value() * b.Z[g].value();
          const double comm = derivation(m, r, v1x0, y10, v2x[k], 0).value() -
                              derivation(m, r, v2x0, y20, v1x[k], 0).value();
          hom = std::max(hom, std::abs(image - comm));
        }
        for (int a = 0; a < r; ++a) {
          const double comm = derivation(m, r, v1x0, y10, s1[j].Y[a], 0).value() -
                              derivation(m, r, v2x0, y20, s1[i].Y[a], 0).value();
          hom = std::max(hom, std::abs(b.Y[a].value() - comm));
        }
      }
    tr.record("anchor-homomorphism", hom, pt);

    double proj = 0.0;
    for (const TangentSection& s : sections)
      for (double z : project_pi_bang(vertical_inclusion(c, s.Y)).values(pt)) proj = std::max(proj, std::abs(z));
    tr.record("projection-exactness", proj, pt);
  });
  return tr.finish(opt.tol);
}

}  // namespace dualgeo
