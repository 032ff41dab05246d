#include "doctest.h"
#include "oracles.hpp"

using namespace dualgeo;

namespace {

// Bracket of two sections given by expressions, with anchored derivatives
// taken by finite differences.
std::vector<double> fd_bracket(const AlgebroidSpec& s, const std::vector<Expr>& u, const std::vector<Expr>& v,
                               const Point& pt) {
  const int p = s.p_rank, m = s.m;
  std::vector<double> out(p, 0.0);
  for (int g = 0; g < p; ++g) {
    double acc = 0.0;
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        acc += eval_value(u[a], pt) * eval_value(v[b], pt) * eval_value(s.L_at(g, a, b), pt);
    for (int a = 0; a < p; ++a)
      for (int i = 0; i < m; ++i) {
        const double rho = eval_value(s.rho_at(a, i), pt);
        acc += eval_value(u[a], pt) * rho * oracle::fd1(oracle::of(v[g]), pt, i);
        acc -= eval_value(v[a], pt) * rho * oracle::fd1(oracle::of(u[g]), pt, i);
      }
    out[g] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("section bracket matches the finite-difference bracket") {
  const AlgebroidSpec s = oracle::aff2();
  const auto u = oracle::parse_all({"(* x1 x2)", "(sin x1)"}, 2, 2);
  const auto v = oracle::parse_all({"(exp x2)", "(+ 1 (* x1 x1))"}, 2, 2);
  const Section b = bracket_sections(s, FieldVec::from_exprs(u), FieldVec::from_exprs(v));
  for (const Point& pt : sample_points(2, 2, 20, 3)) {
    const auto got = b.values(pt);
    const auto want = fd_bracket(s, u, v, pt);
    for (int g = 0; g < 2; ++g) CHECK(got[g] == doctest::Approx(want[g]).epsilon(1e-8));
  }
}

TEST_CASE("so(3) bundle satisfies the algebroid axioms") {
  const CheckReport r = check_algebroid(oracle::so3(), oracle::options(100, 1));
  CHECK(r.pass);
  CHECK(r.max_residual < 1e-12);
}

TEST_CASE("algebroids with x-dependent anchors pass") {
  for (const auto& s : {oracle::aff2(), oracle::rot3()}) {
    const CheckReport r = check_algebroid(s, oracle::options(50, 2));
    CHECK_MESSAGE(r.pass, r.notes);
    CHECK(r.max_residual < 1e-12);
  }
}

TEST_CASE("broken structure functions fail") {
  AlgebroidSpec s = oracle::so3();
  s.L[(2 * 3 + 0) * 3 + 1] = Expr(2.0);  // no longer antisymmetric
  const CheckReport r = check_algebroid(s, oracle::options(20, 1));
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual >= 0.1);

  AlgebroidSpec t = oracle::aff2();
  t.L[(1 * 2 + 0) * 2 + 1] = Expr(2.0);  // anchor relation broken, antisymmetry too
  t.L[(1 * 2 + 1) * 2 + 0] = Expr(-2.0);
  const CheckReport q = check_algebroid(t, oracle::options(20, 1));
  CHECK_FALSE(q.pass);
  CHECK(q.max_residual >= 0.1);
}

TEST_CASE("composition with h substitutes the base map") {
  AlgebroidSpec s = oracle::aff2();
  s.h_map = oracle::parse_all({"(* 2 x1)", "x2"}, 2, 2);
  const AlgebroidSpec c = s.composed();
  CHECK(c.identity_morphisms());
  const Point pt{{0.3, 0.1}, {1.0, 1.0}};
  CHECK(eval_value(c.rho_at(1, 1), pt) == doctest::Approx(std::exp(0.6)));
  // theta = rho(h(x)) dh/dx
  const auto th = theta(s).values(pt);
  CHECK(th[0] == doctest::Approx(2.0));
  CHECK(th[3] == doctest::Approx(std::exp(0.6)));
  AlgebroidSpec bad = s;
  bad.h_map = oracle::parse_all({"p1", "x2"}, 2, 2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("tangent bracket satisfies Jacobi and the anchor homomorphism") {
  for (const auto& s : {oracle::classical(2), oracle::aff2()}) {
    const CheckReport r = check_tangent(s, oracle::options(30, 5));
    CHECK_MESSAGE(r.pass, r.notes);
    CHECK(r.max_residual < 1e-12);
  }
}

TEST_CASE("tangent bracket of vertical sections is their commutator") {
  const AlgebroidSpec s = oracle::classical(1);
  // X1 = (0, p1), X2 = (0, p1^2): [p1 d/dp1, p1^2 d/dp1] = p1^2 d/dp1.
  const TangentSection X1 = vertical_inclusion(s, FieldVec::from_exprs({Expr::p(1)}));
  const TangentSection X2 = vertical_inclusion(s, FieldVec::from_exprs({Expr::p(1) * Expr::p(1)}));
  const TangentSection B = bracket_tangent(s, X1, X2);
  const Point pt{{0.2}, {1.7}};
  CHECK(B.Y.values(pt)[0] == doctest::Approx(1.7 * 1.7));
  CHECK(B.Z.values(pt)[0] == 0.0);
  const TangentVectorValue a = anchor_image(s, B, pt);
  CHECK(a.dp[0] == doctest::Approx(1.7 * 1.7));
}
