#include "doctest.h"
#include "oracles.hpp"

using namespace dualgeo;

namespace {

HamiltonFunction ham(const std::string& text, int m, int r, FunctionKind kind = FunctionKind::Hamilton) {
  return {oracle::parse(text, m, r), kind};
}

}  // namespace

TEST_CASE("Hessian metrics") {
  const Point pt{{std::log(2.0), 0.0}, {0.7, -1.1}};
  const auto id = hessian_metric(ham("(* 0.5 (+ (* p1 p1) (* p2 p2)))", 2, 2), pt);
  CHECK(id == std::vector<double>{1, 0, 0, 1});
  const auto e = hessian_metric(ham("(* 0.5 (+ (* (exp x1) (* p1 p1)) (* (exp x2) (* p2 p2))))", 2, 2), pt);
  CHECK(e[0] == doctest::Approx(2.0));
  CHECK(e[3] == doctest::Approx(1.0));
  CHECK(e[1] == 0.0);
  const auto k = hessian_metric(ham("(sqrt (+ (* p1 p1) (* p2 p2)))", 2, 2, FunctionKind::Cartan), pt);
  CHECK(k[0] == doctest::Approx(2.0));
  CHECK(k[3] == doctest::Approx(2.0));
  CHECK(std::abs(k[1]) < 1e-14);
  const auto half = hessian_metric(ham("(* p1 p2)", 2, 2), pt, true);
  CHECK(half[1] == 0.5);
}

TEST_CASE("Hessian field derivatives match finite differences") {
  const HamiltonFunction H = ham("(* (exp (* x1 p2)) (+ 1 (* p1 p1 p2)))", 2, 2);
  const FieldVec g = hessian_metric_field(H, 2);
  const Point pt{{0.3, -0.2}, {0.5, 0.8}};
  const auto jets = g(pt, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      auto entry = [&](const Point& q) { return hessian_metric(H, q)[a * 2 + b]; };
      CHECK(jets[a * 2 + b].value() == entry(pt));
      CHECK(jets[a * 2 + b].value() == jets[b * 2 + a].value());
      for (int v = 0; v < 4; ++v) CHECK(jets[a * 2 + b].d(v) == doctest::Approx(oracle::fd1(entry, pt, v)).epsilon(1e-7));
    }
  CHECK_THROWS(g(pt, 2));
}

TEST_CASE("regularity") {
  const auto opt = oracle::options(30, 1);
  const CheckReport a = check_regularity(ham("(* 0.5 (+ (* p1 p1) (* p2 p2)))", 2, 2), 2, 2, opt);
  CHECK(a.pass);
  CHECK(a.max_residual == 0.0);
  CHECK(check_regularity(ham("(* p1 p2)", 2, 2), 2, 2, opt).pass);
  const CheckReport c = check_regularity(ham("(* 0.5 (* p1 p1))", 2, 2), 2, 2, opt);
  CHECK_FALSE(c.pass);
  CHECK(c.max_residual > 0.0);
}

TEST_CASE("homogeneity") {
  const auto opt = oracle::options(50, 2);
  const CheckReport a = check_homogeneity(ham("(sqrt (+ (* p1 p1) (* p2 p2)))", 2, 2, FunctionKind::Cartan), 2, 2, opt);
  CHECK(a.pass);
  CHECK(a.max_residual < 1e-12);
  const HamiltonFunction K = ham("(sqrt (+ (* (exp x1) (* p1 p1)) (* (exp x2) (* p2 p2))))", 2, 2, FunctionKind::Cartan);
  CHECK(check_homogeneity(K, 2, 2, opt).pass);
  const HamiltonFunction sq = ham("(+ (* p1 p1) (* p2 p2))", 2, 2, FunctionKind::Cartan);
  const CheckReport b = check_homogeneity(sq, 2, 2, opt);
  CHECK_FALSE(b.pass);
  // Euler residual of a degree-2 function is the function itself.
  const Point& w = b.worst_point;
  CHECK(b.max_residual == doctest::Approx(w.p[0] * w.p[0] + w.p[1] * w.p[1]));
  // Indefinite K*K Hessian.
  const HamiltonFunction ind = ham("(sqrt (+ 4 (- (* p1 p1) (* p2 p2))))", 2, 2, FunctionKind::Cartan);
  CHECK_FALSE(check_homogeneity(ind, 2, 2, opt).pass);
  // The K*K Hessian is 0-homogeneous in p.
  for (const Point& pt : sample_points(2, 2, 20, 3)) {
    Point twice = pt;
    for (double& v : twice.p) v *= 2;
    const auto h1 = hessian_metric(K, pt), h2 = hessian_metric(K, twice);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(h1[k] - h2[k]) < 1e-9);
  }
}

TEST_CASE("Levi-Civita normal connection: classical spot value") {
  const AlgebroidSpec s = oracle::classical(2);
  const auto gv = oracle::parse_all({"(exp x1)", "0", "0", "(exp x2)"}, 2, 2);
  const NormalConnection lc = levi_civita_normal(s, NonlinearConnection::zero(2, 2), FieldVec::from_exprs(gv));
  for (const Point& pt : sample_points(2, 2, 20, 8)) {
    const NormalValues v = lc(pt);
    // Christoffel symbols of g~ = diag(exp(-x1), exp(-x2)) by finite differences.
    auto gt = [&](int a, int b) -> oracle::Scalar {
      return [&, a, b](const Point& q) { return a == b ? std::exp(-q.x[a]) : 0.0; };
    };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double want = 0.0;
          for (int h = 0; h < 2; ++h)
            want += 0.5 * eval_value(gv[i * 2 + h], pt) *
                    (oracle::fd1(gt(h, k), pt, j) + oracle::fd1(gt(j, h), pt, k) - oracle::fd1(gt(j, k), pt, h));
          CHECK(std::abs(v.H(i, j, k) - want) < 1e-8);
        }
    CHECK(v.H(0, 0, 0) == doctest::Approx(-0.5));
    CHECK(v.H(1, 1, 1) == doctest::Approx(-0.5));
    for (double c : v.v) CHECK(c == 0.0);
  }
}

TEST_CASE("Levi-Civita normal connection: structure-function terms") {
  const AlgebroidSpec s = oracle::so3();
  const FieldVec id = FieldVec::from_exprs(oracle::parse_all({"1", "0", "0", "0", "1", "0", "0", "0", "1"}, 3, 3));
  const NormalConnection lc = levi_civita_normal(s, NonlinearConnection::zero(3, 3), id);
  const Point pt{{0.1, 0.2, 0.3}, {1, 0.5, -0.5}};
  const NormalValues v = lc(pt);
  auto L = [&](int g, int a, int b) { return eval_value(s.L_at(g, a, b), pt); };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const double want = 0.5 * (-L(c, b, a) + L(b, a, c) - L(a, b, c));
        CHECK(std::abs(v.H(a, b, c) - want) < 1e-12);
      }
}

TEST_CASE("flat zero connection has zero torsion") {
  const AlgebroidSpec s = oracle::classical(2);
  const FieldVec id = FieldVec::from_exprs(oracle::parse_all({"1", "0", "0", "1"}, 2, 2));
  const NormalConnection lc = levi_civita_normal(s, NonlinearConnection::zero(2, 2), id);
  const TorsionValues t = torsion_recover(s, lc)(Point{{0, 0}, {1, 1}});
  for (double v : t.T) CHECK(v == 0.0);
  for (double v : t.S) CHECK(v == 0.0);
  const NormalConnection same = torsion_family(lc, id, TorsionPrescription::zero(2));
  CHECK(normal_to_dlc(same(Point{{0.2, 0.1}, {1, 1}})).max_abs_diff(normal_to_dlc(lc(Point{{0.2, 0.1}, {1, 1}}))) == 0.0);
}

TEST_CASE("torsion prescriptions survive the round trip") {
  const AlgebroidSpec specs[] = {oracle::aff2(), oracle::rot3()};
  for (const auto& s : specs) {
    const int r = s.r_rank;
    std::mt19937_64 rng(77);
    const NonlinearConnection conn = oracle::random_connection(s.m, r, r, rng);
    const PseudoMetric G = oracle::random_metric(s, 3);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const TorsionPrescription P = random_prescription(r, 100 + k);
      const CheckReport rep = check_torsion_roundtrip(s, conn, G.g_v, P, oracle::options(20, k, 1.0));
      CHECK_MESSAGE(rep.pass, rep.notes);
      CHECK(rep.max_residual < 1e-10);
    }
  }
}

TEST_CASE("torsion prescriptions must be antisymmetric") {
  TorsionPrescription P = TorsionPrescription::zero(2);
  P.T[(0 * 2 + 0) * 2 + 1] = Expr(1.0);
  CHECK_THROWS_AS(P.validate({Point{{0, 0}, {1, 1}}}), std::invalid_argument);
  P.T[(0 * 2 + 1) * 2 + 0] = Expr(-1.0);
  CHECK_NOTHROW(P.validate({Point{{0, 0}, {1, 1}}}));
  P.S[(0 * 2 + 0) * 2 + 1] = Expr(1.0);  // S^{01}_0 without S^{10}_0
  CHECK_THROWS_AS(P.validate({Point{{0, 0}, {1, 1}}}), std::invalid_argument);
}
