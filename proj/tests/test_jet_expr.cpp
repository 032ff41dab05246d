#include "doctest.h"
#include "oracles.hpp"
#include "random_expr.hpp"

using namespace dualgeo;
using oracle::fd1;
using oracle::fd2;
using oracle::fd3;

TEST_CASE("jet products follow the Leibniz rule") {
  // f = x*y, g = x + 2y at (1.5, -0.5)
  const Jet x = Jet::variable(2, 3, 0, 1.5), y = Jet::variable(2, 3, 1, -0.5);
  const Jet f = x * y;
  CHECK(f.value() == doctest::Approx(-0.75));
  CHECK(f.d(0) == doctest::Approx(-0.5));
  CHECK(f.d(1) == doctest::Approx(1.5));
  CHECK(f.d(0, 1) == 1.0);
  CHECK(f.d(1, 0) == 1.0);
  CHECK(f.d(0, 0) == 0.0);
  const Jet cube = x * x * x;
  CHECK(cube.d(0, 0, 0) == doctest::Approx(6.0));
  CHECK(cube.d(0, 0) == doctest::Approx(9.0));
}

TEST_CASE("partial lowers the order and shifts the derivatives") {
  const Jet x = Jet::variable(2, 3, 0, 0.7), y = Jet::variable(2, 3, 1, 0.2);
  const Jet f = x * x * y;
  const Jet fx = f.partial(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(2 * 0.7 * 0.2));
  CHECK(fx.d(1) == doctest::Approx(2 * 0.7));
  CHECK(fx.d(0, 1) == doctest::Approx(2.0));
  const Jet t = f.truncated(1);
  CHECK(t.order() == 1);
  CHECK(t.d(0) == f.d(0));
}

TEST_CASE("binary operations take the lower order") {
  const Jet a = Jet::variable(1, 3, 0, 2.0), b = Jet::variable(1, 1, 0, 2.0);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
  Jet acc = Jet::constant(1, 2, 0.0);
  acc.add_product(a, a);
  CHECK(acc.order() == 2);
  CHECK(acc.d(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("parse and print round trip") {
  const char* texts[] = {"(* 0.5 (+ (* (exp x1) (* p1 p1)) (* (exp x2) (* p2 p2))))", "(sqrt (+ (* p1 p1) (* p2 p2)))",
                         "(pow (+ 1 x1) -0.5)", "(/ (sin x2) (+ 2 (cos p1)))", "(neg (log (+ 3 x1)))", "-2.5"};
  for (const char* t : texts) {
    const Expr e = parse_expr(t, 2, 2);
    CHECK(e.str() == t);
    CHECK(parse_expr(e.str(), 2, 2) == e);
  }
}

TEST_CASE("parse errors carry their location") {
  try {
    parse_expr("(+ p1 p3)", 2, 2);
    FAIL("expected an index error");
  } catch (const IndexRangeError& e) {
    CHECK(e.position() == 6);
  }
  try {
    parse_expr("(+ x1 (foo x2))", 2, 2);
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 7);
  }
  CHECK_THROWS_AS(parse_expr("(+ x1", 2, 2), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(pow x1 x2)", 2, 2), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(sin x1 x2)", 2, 2), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x3", 2, 2), IndexRangeError);
  CHECK_THROWS_AS(parse_expr("x1 x2", 2, 2), SyntaxError);
}

TEST_CASE("domain errors name the offending subexpression") {
  const Point pt{{-1.0, 0.0}, {0.0, 0.0}};
  try {
    eval_jet(parse_expr("(+ 1 (log x1))", 2, 2), pt, 1);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "(log x1)");
  }
  CHECK_THROWS_AS(eval_value(parse_expr("(sqrt x1)", 2, 2), pt), DomainError);
  CHECK_THROWS_AS(eval_value(parse_expr("(/ 1 p1)", 2, 2), pt), DomainError);
  CHECK_THROWS_AS(eval_value(parse_expr("(pow x1 0.5)", 2, 2), pt), DomainError);
  CHECK(eval_value(parse_expr("(pow x1 3)", 2, 2), pt) == -1.0);
}

TEST_CASE("jets agree with value evaluation and with finite differences") {
  oracle::RandomExpr gen(2, 2, 42);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Expr e = gen(5);
    const Point pt{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const Jet j = eval_jet(e, pt, 3);
    const auto f = oracle::of(e);
    CHECK(oracle::rel_err(j.value(), f(pt)) < 1e-14);
    for (int a = 0; a < 4; ++a) {
      CHECK(oracle::rel_err(j.d(a), fd1(f, pt, a)) < 1e-7);
      for (int b = a; b < 4; ++b) {
        CHECK(oracle::rel_err(j.d(a, b), fd2(f, pt, a, b)) < 1e-5);
        CHECK(j.d(a, b) == j.d(b, a));
        for (int c = b; c < 4; ++c) CHECK(oracle::rel_err(j.d(a, b, c), fd3(f, pt, a, b, c)) < 1e-3);
      }
    }
  }
}

TEST_CASE("substitution composes with the base map") {
  const Expr e = parse_expr("(* x1 (sin x2))", 2, 1);
  const std::vector<Expr> h = {parse_expr("(+ x1 x2)", 2, 1), parse_expr("(* 2 x2)", 2, 1)};
  const Expr c = substitute_x(e, h);
  const Point pt{{0.3, -0.4}, {1.0}};
  CHECK(eval_value(c, pt) == doctest::Approx((0.3 - 0.4) * std::sin(-0.8)));
}
