#pragma once

// Reference computations used only by the tests: central finite differences
// on plain point evaluation, and small fixture builders.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dualgeo/hamilton.hpp"
#include "dualgeo/scenario.hpp"

namespace oracle {

using dualgeo::Expr;
using dualgeo::Point;
using Scalar = std::function<double(const Point&)>;

// Variable k is x^{k+1} for k < m, else p_{k-m+1}.
inline Point shifted(Point pt, int var, double delta) {
  if (var < pt.m())
    pt.x[var] += delta;
  else
    pt.p[var - pt.m()] += delta;
  return pt;
}

inline double fd1(const Scalar& f, const Point& pt, int i, double h = 1e-5) {
  return (f(shifted(pt, i, h)) - f(shifted(pt, i, -h))) / (2 * h);
}

inline double fd2(const Scalar& f, const Point& pt, int i, int j, double h = 1e-4) {
  double s = 0.0;
  for (int si : {1, -1})
    for (int sj : {1, -1}) s += si * sj * f(shifted(shifted(pt, i, si * h), j, sj * h));
  return s / (4 * h * h);
}

inline double fd3_raw(const Scalar& f, const Point& pt, int i, int j, int k, double h) {
  double s = 0.0;
  for (int si : {1, -1})
    for (int sj : {1, -1})
      for (int sk : {1, -1}) s += si * sj * sk * f(shifted(shifted(shifted(pt, i, si * h), j, sj * h), k, sk * h));
  return s / (8 * h * h * h);
}

// Richardson step on the O(h^2) stencil.
inline double fd3(const Scalar& f, const Point& pt, int i, int j, int k, double h = 1e-3) {
  return (4 * fd3_raw(f, pt, i, j, k, h / 2) - fd3_raw(f, pt, i, j, k, h)) / 3;
}

inline Scalar of(const Expr& e) {
  return [e](const Point& pt) { return dualgeo::eval_value(e, pt); };
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline Expr parse(const std::string& s, int m, int r) { return dualgeo::parse_expr(s, m, r); }

inline std::vector<Expr> parse_all(const std::vector<std::string>& v, int m, int r) {
  std::vector<Expr> out;
  for (const auto& s : v) out.push_back(parse(s, m, r));
  return out;
}

// rho = identity, L = 0.
inline dualgeo::AlgebroidSpec classical(int m) {
  dualgeo::AlgebroidSpec s;
  s.m = s.p_rank = s.r_rank = m;
  s.rho.assign(m * m, Expr());
  for (int i = 0; i < m; ++i) s.rho[i * m + i] = Expr(1.0);
  s.L.assign(m * m * m, Expr());
  return s;
}

// so(3) bundle over a 3-manifold with zero anchor.
inline dualgeo::AlgebroidSpec so3(int m = 3) {
  dualgeo::AlgebroidSpec s;
  s.m = m;
  s.p_rank = s.r_rank = 3;
  s.rho.assign(3 * m, Expr());
  s.L.assign(27, Expr());
  const int perm[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& q : perm) {
    s.L[(q[2] * 3 + q[0]) * 3 + q[1]] = Expr(1.0);
    s.L[(q[2] * 3 + q[1]) * 3 + q[0]] = Expr(-1.0);
  }
  return s;
}

// rho_1 = d/dx1, rho_2 = exp(x1) d/dx2, [e1, e2] = e2.
inline dualgeo::AlgebroidSpec aff2() {
  dualgeo::AlgebroidSpec s;
  s.m = s.p_rank = s.r_rank = 2;
  s.rho = {Expr(1.0), Expr(), Expr(), dualgeo::exp(Expr::x(1))};
  s.L.assign(8, Expr());
  s.L[(1 * 2 + 0) * 2 + 1] = Expr(1.0);
  s.L[(1 * 2 + 1) * 2 + 0] = Expr(-1.0);
  return s;
}

// A rank-3 algebroid over a 2-manifold with x-dependent anchor:
// rho_1 = d/dx1, rho_2 = d/dx2, rho_3 = x2 d/dx1 - x1 d/dx2 (the rotation
// field), with [e1, e3] = -e2, [e2, e3] = e1.
inline dualgeo::AlgebroidSpec rot3() {
  dualgeo::AlgebroidSpec s;
  s.m = 2;
  s.p_rank = s.r_rank = 3;
  s.rho = {Expr(1.0), Expr(), Expr(), Expr(1.0), Expr::x(2), -Expr::x(1)};
  s.L.assign(27, Expr());
  auto set = [&](int g, int a, int b, double v) {
    s.L[(g * 3 + a) * 3 + b] = Expr(v);
    s.L[(g * 3 + b) * 3 + a] = Expr(-v);
  };
  set(1, 0, 2, -1.0);
  set(0, 1, 2, 1.0);
  return s;
}

// Symmetric n x n block 2 I + small polynomial terms in (x, p); positive
// definite whenever |x_i| <= 1 and |p| <= 1.
inline std::vector<Expr> random_block(int n, int m, int r, std::mt19937_64& rng, bool with_p = true) {
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::uniform_int_distribution<int> pick_x(1, m), pick_p(1, r);
  std::vector<Expr> g(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Expr e = a == b ? Expr(2.0) : Expr(0.0);
      e = e + Expr(u(rng)) * Expr::x(pick_x(rng));
      if (with_p) {
        e = e + Expr(u(rng)) * Expr::p(pick_p(rng));
        e = e + Expr(u(rng)) * Expr::x(pick_x(rng)) * Expr::p(pick_p(rng));
      } else {
        e = e + Expr(u(rng)) * Expr::x(pick_x(rng)) * Expr::x(pick_x(rng));
      }
      g[a * n + b] = g[b * n + a] = e;
    }
  return g;
}

inline dualgeo::PseudoMetric random_metric(const dualgeo::AlgebroidSpec& s, std::uint64_t seed, bool with_p = true) {
  std::mt19937_64 rng(seed);
  auto gh = random_block(s.p_rank, s.m, s.r_rank, rng, with_p);
  auto gv = random_block(s.r_rank, s.m, s.r_rank, rng, with_p);
  return dualgeo::PseudoMetric::from_exprs(s.p_rank, s.r_rank, gh, gv);
}

// Random polynomial entries of degree <= 2 in (x, p).
inline std::vector<Expr> random_entries(std::size_t count, int m, int r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_x(1, m), pick_p(1, r);
  std::vector<Expr> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(Expr(u(rng)) + Expr(u(rng)) * Expr::x(pick_x(rng)) +
                  Expr(u(rng)) * Expr::p(pick_p(rng)) * Expr::x(pick_x(rng)));
  return out;
}

inline dualgeo::DlcExprs random_dlc_exprs(int m, int p, int r, std::mt19937_64& rng) {
  return {random_entries(p * p * p, m, r, rng), random_entries(r * r * p, m, r, rng),
          random_entries(p * p * r, m, r, rng), random_entries(r * r * r, m, r, rng)};
}

inline dualgeo::NonlinearConnection random_connection(int m, int p, int r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> pick_x(1, m), pick_p(1, r);
  dualgeo::NonlinearConnection c = dualgeo::NonlinearConnection::zero(r, p);
  for (auto& g : c.gamma)
    g = Expr(u(rng)) * Expr::p(pick_p(rng)) + Expr(u(rng)) * Expr::x(pick_x(rng)) * Expr::p(pick_p(rng)) +
        Expr(u(rng)) * Expr::p(pick_p(rng)) * Expr::p(pick_p(rng));
  return c;
}

inline dualgeo::CheckOptions options(int samples, std::uint64_t seed, double p_max = 2.0) {
  dualgeo::CheckOptions o;
  o.samples = samples;
  o.seed = seed;
  o.box.p_max = p_max;
  return o;
}

}  // namespace oracle
