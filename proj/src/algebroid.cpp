#include "dualgeo/algebroid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dualgeo {

void AlgebroidSpec::validate() const {
  if (m < 1 || p_rank < 1 || r_rank < 0) throw std::invalid_argument("dimensions must be positive");
  if (static_cast<int>(rho.size()) != p_rank * m) throw std::invalid_argument("rho must be p_rank x m");
  if (static_cast<int>(L.size()) != p_rank * p_rank * p_rank) throw std::invalid_argument("L must be p_rank^3");
  auto check_map = [&](const std::optional<std::vector<Expr>>& map, const char* name) {
    if (!map) return;
    if (static_cast<int>(map->size()) != m) throw std::invalid_argument(std::string(name) + " must have m entries");
    for (const Expr& e : *map)
      if (e.references_p()) throw std::invalid_argument(std::string(name) + " may not reference momenta");
  };
  check_map(h_map, "h");
  check_map(eta_map, "eta");
}

AlgebroidSpec AlgebroidSpec::composed() const {
  AlgebroidSpec out = *this;
  out.h_map.reset();
  out.eta_map.reset();
  if (!h_map) return out;
  for (Expr& e : out.rho) e = substitute_x(e, *h_map);
  for (Expr& e : out.L) e = substitute_x(e, *h_map);
  return out;
}

FieldVec AlgebroidSpec::rho_field() const { return FieldVec::from_exprs(composed().rho); }
FieldVec AlgebroidSpec::L_field() const { return FieldVec::from_exprs(composed().L); }

Section constant_section(const AlgebroidSpec& spec, int alpha, const Expr& coefficient) {
  std::vector<Expr> comps(spec.p_rank);
  comps.at(alpha) = coefficient;
  return FieldVec::from_exprs(std::move(comps));
}

FieldVec theta(const AlgebroidSpec& spec) {
  const AlgebroidSpec c = spec.composed();
  if (!spec.h_map) return FieldVec::from_exprs(c.rho);
  const int m = spec.m, p = spec.p_rank;
  FieldVec rho = FieldVec::from_exprs(c.rho);
  FieldVec h = FieldVec::from_exprs(*spec.h_map);
  return FieldVec(static_cast<std::size_t>(p) * m, [=](const Point& pt, int order) {
    const std::vector<Jet> r = rho(pt, order);
    const std::vector<Jet> hj = h(pt, order + 1);
    std::vector<Jet> out(p * m, Jet(pt.n(), order));
    for (int a = 0; a < p; ++a)
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) out[a * m + k].add_product(r[a * m + i], hj[k].partial(i));
    return out;
  });
}

Jet anchor_derivative(int m, int p, const std::vector<Jet>& rho, const std::vector<Jet>& u, const Jet& f, int order) {
  Jet out(f.dim(), order);
  for (int i = 0; i < m; ++i) {
    Jet coeff(f.dim(), order);
    bool any = false;
    for (int a = 0; a < p; ++a) {
      if (rho[a * m + i].value() == 0.0 && rho[a * m + i].order() == 0) continue;
      coeff.add_product(rho[a * m + i], u[a]);
      any = true;
    }
    if (any) out.add_product(coeff, f.partial(i));
  }
  return out;
}

std::vector<Jet> bracket_at(int m, int p, const std::vector<Jet>& rho, const std::vector<Jet>& L,
                            const std::vector<Jet>& u, const std::vector<Jet>& v, int order) {
  const int n = u.at(0).dim();
  std::vector<Jet> uk, vk;
  for (const Jet& j : u) uk.push_back(j.truncated(order));
  for (const Jet& j : v) vk.push_back(j.truncated(order));

  // Anchored coefficient fields rho(u)^i and rho(v)^i at order k.
  std::vector<Jet> au(m, Jet(n, order)), av(m, Jet(n, order));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < p; ++a) {
      au[i].add_product(rho[a * m + i], uk[a]);
      av[i].add_product(rho[a * m + i], vk[a]);
    }

  std::vector<Jet> out(p, Jet(n, order));
  for (int g = 0; g < p; ++g) {
    Jet& res = out[g];
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        const Jet& l = L[(g * p + a) * p + b];
        if (l.value() == 0.0 && order == 0) continue;
        res.add_product(uk[a] * vk[b], l);
      }
    for (int i = 0; i < m; ++i) {
      res.add_product(au[i], v[g].partial(i));
      res -= av[i] * u[g].partial(i);
    }
  }
  return out;
}

Section bracket_sections(const AlgebroidSpec& spec, const Section& u, const Section& v) {
  const AlgebroidSpec c = spec.composed();
  const int m = c.m, p = c.p_rank;
  FieldVec rho = FieldVec::from_exprs(c.rho);
  FieldVec L = FieldVec::from_exprs(c.L);
  return FieldVec(p, [=](const Point& pt, int order) {
    if (order + 1 > Jet::kMaxOrder) throw std::invalid_argument("bracket needs one extra jet order");
    return bracket_at(m, p, rho(pt, order), L(pt, order), u(pt, order + 1), v(pt, order + 1), order);
  });
}

namespace {

double max_abs(const std::vector<Jet>& v) {
  double worst = 0.0;
  for (const Jet& j : v) worst = std::max(worst, std::abs(j.value()));
  return worst;
}

std::vector<Jet> negated(const std::vector<Jet>& v) {
  std::vector<Jet> out;
  for (const Jet& j : v) out.push_back(-j);
  return out;
}

std::vector<Jet> sum3(const std::vector<Jet>& a, const std::vector<Jet>& b, const std::vector<Jet>& c) {
  std::vector<Jet> out;
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] + b[k] + c[k]);
  return out;
}

}  // namespace

CheckReport check_algebroid(const AlgebroidSpec& spec, const CheckOptions& opt) {
  spec.validate();
  const AlgebroidSpec c = spec.composed();
  const int m = c.m, p = c.p_rank;
  const FieldVec rho = FieldVec::from_exprs(c.rho);
  const FieldVec L = FieldVec::from_exprs(c.L);

  // Generating family: e_a and x^i e_a.
  std::vector<std::vector<Expr>> family;
  for (int a = 0; a < p; ++a) {
    std::vector<Expr> s(p);
    s[a] = Expr(1.0);
    family.push_back(s);
  }
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < p; ++a) {
      std::vector<Expr> s(p);
      s[a] = Expr::x(i + 1);
      family.push_back(s);
    }
  std::vector<FieldVec> sections;
  for (auto& s : family) sections.push_back(FieldVec::from_exprs(s));
  const int F = static_cast<int>(sections.size());

  ResidualTracker tr("algebroid-axioms");
  for (const char* f : {"antisymmetry", "jacobi", "anchor-compatibility", "anchor-homomorphism"}) tr.family(f);
  if (!spec.identity_morphisms()) tr.note("checked with h composed into rho and L");

  const auto pts = sample_points(c.m, c.r_rank, opt.samples, opt.seed, opt.box);
  tr.for_each(pts, [&](const Point& pt) {
    const std::vector<Jet> rho1 = rho(pt, 1), L1 = L(pt, 1);
    std::vector<Jet> rho0, L0;
    for (const Jet& j : rho1) rho0.push_back(j.truncated(0));
    for (const Jet& j : L1) L0.push_back(j.truncated(0));

    double anti = 0.0;
    for (int g = 0; g < p; ++g)
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
          anti = std::max(anti, std::abs(L0[(g * p + a) * p + b].value() + L0[(g * p + b) * p + a].value()));
    tr.record("antisymmetry", anti, pt);

    double anchor = 0.0;
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        for (int k = 0; k < m; ++k) {
          double lhs = 0.0;
          for (int g = 0; g < p; ++g) lhs += L0[(g * p + a) * p + b].value() * rho0[g * m + k].value();
          double rhs = 0.0;
          for (int i = 0; i < m; ++i)
            rhs += rho0[a * m + i].value() * rho1[b * m + k].d(i) - rho0[b * m + i].value() * rho1[a * m + k].d(i);
          anchor = std::max(anchor, std::abs(lhs - rhs));
        }
    tr.record("anchor-compatibility", anchor, pt);

    std::vector<std::vector<Jet>> s2, s1;
    for (const FieldVec& s : sections) {
      s2.push_back(s(pt, 2));
      std::vector<Jet> t;
      for (const Jet& j : s2.back()) t.push_back(j.truncated(1));
      s1.push_back(std::move(t));
    }
    std::vector<std::vector<Jet>> br(F * F);
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j) {
        br[i * F + j] = bracket_at(m, p, rho1, L1, s2[i], s2[j], 1);
        br[j * F + i] = negated(br[i * F + j]);
      }

    double jac = 0.0;
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j)
        for (int k = j + 1; k < F; ++k) {
          auto t1 = bracket_at(m, p, rho0, L0, br[i * F + j], s1[k], 0);
          auto t2 = bracket_at(m, p, rho0, L0, br[j * F + k], s1[i], 0);
          auto t3 = bracket_at(m, p, rho0, L0, br[k * F + i], s1[j], 0);
          jac = std::max(jac, max_abs(sum3(t1, t2, t3)));
        }
    tr.record("jacobi", jac, pt);

    // theta([u,v])(x^k) against theta(u)(theta(v)(x^k)) - theta(v)(theta(u)(x^k)).
    double hom = 0.0;
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j)
        for (int k = 0; k < m; ++k) {
          double lhs = 0.0;
          for (int g = 0; g < p; ++g) lhs += br[i * F + j][g].value() * rho0[g * m + k].value();
          Jet tu(pt.n(), 1), tv(pt.n(), 1);
          for (int a = 0; a < p; ++a) {
            tu.add_product(s1[i][a], rho1[a * m + k]);
            tv.add_product(s1[j][a], rho1[a * m + k]);
          }
          const double rhs = anchor_derivative(m, p, rho0, s1[i], tv, 0).value() -
                             anchor_derivative(m, p, rho0, s1[j], tu, 0).value();
          hom = std::max(hom, std::abs(lhs - rhs));
        }
    tr.record("anchor-homomorphism", hom, pt);
  });
  return tr.finish(opt.tol);
}

}  // namespace dualgeo
