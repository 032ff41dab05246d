// One line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "oracles.hpp"
#include "random_expr.hpp"

using namespace dualgeo;

namespace {

// Tolerances and budgets, fixed here.
constexpr double kClassicalTol = 1e-12;
constexpr double kClassicalSeconds = 2.0;
constexpr double kCompatTol = 1e-9;
constexpr double kCompatSeconds = 30.0;
constexpr double kAgreementTol = 1e-10;
constexpr double kObataTol = 1e-10;
constexpr double kTorsionTol = 1e-10;
constexpr double kSpotTol = 1e-8;
constexpr double kAxiomTol = 1e-12;
constexpr double kMutationFloor = 0.1;
constexpr double kLawTol = 1e-10;
constexpr double kIdentityTol = 1e-14;
constexpr double kJet1Tol = 1e-7, kJet2Tol = 1e-5, kJet3Tol = 1e-3;
constexpr double kJetSeconds = 10.0;
constexpr double kEulerTol = 1e-10;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckOptions unit_box(int samples, std::uint64_t seed) { return oracle::options(samples, seed, 1.0); }

Outcome classical_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult res = run_example("classical-flat");
  double worst = 0.0;
  bool pass = res.all_pass();
  for (const auto& r : res.reports) worst = std::max(worst, r.max_residual);
  // Every constructed connection coefficient vanishes.
  const Scenario s = parse_scenario(example_source("classical-flat"));
  const PseudoMetric G = induced_metric(hessian_metric_field(*s.fundamental, 2), 2);
  const NonlinearConnection c = s.connection;
  const DistinguishedConnection zero = DistinguishedConnection::zero(2, 2);
  const DistinguishedConnection built[] = {
      metrizable_from(s.spec, c, zero, G), metrizable_berwald(s.spec, c, G), riemannian_berwald(s.spec, c, G),
      metrizable_family(s.spec, c, G, DeformationTensors::zero(2, 2)), metrizable_deformation(s.spec, c, zero, G),
      levi_civita_normal(s.spec, c, G.g_v).to_dlc()};
  double coeff = 0.0;
  for (const Point& pt : sample_points(2, 2, 100, 1))
    for (const auto& d : built) coeff = std::max(coeff, d(pt).max_abs_diff(zero(pt)));
  const double secs = seconds_since(t0);
  pass = pass && worst < kClassicalTol && coeff == 0.0 && secs < kClassicalSeconds;
  return {pass, "max residual " + fmt(worst) + ", max coefficient " + fmt(coeff) + ", " + fmt(secs) + " s"};
}

Outcome metric_compatibility() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool pass = true;
  int runs = 0;
  auto run_all = [&](const AlgebroidSpec& s, const NonlinearConnection& conn, const PseudoMetric& G,
                     std::mt19937_64& rng, const CheckOptions& opt) {
    const int p = s.p_rank, r = s.r_rank;
    const DistinguishedConnection d0 = DistinguishedConnection::from_exprs(p, r, oracle::random_dlc_exprs(s.m, p, r, rng));
    const DeformationTensors D = DeformationTensors::from_exprs(p, r, oracle::random_dlc_exprs(s.m, p, r, rng));
    const DistinguishedConnection built[] = {metrizable_from(s, conn, d0, G), metrizable_berwald(s, conn, G),
                                             metrizable_family(s, conn, G, D), metrizable_deformation(s, conn, d0, G)};
    for (const auto& d : built) {
      const CheckReport rep = check_compatibility(s, conn, d, G, opt);
      worst = std::max(worst, rep.max_residual);
      pass = pass && rep.pass && rep.max_residual < kCompatTol;
      ++runs;
    }
  };
  {
    const Scenario s = parse_scenario(example_source("exp-metric"));
    std::mt19937_64 rng(1);
    run_all(s.spec, s.connection, PseudoMetric::from_exprs(2, 2, *s.g_h, *s.g_v), rng, unit_box(100, 1));
  }
  for (std::uint64_t k = 0; k < 10; ++k) {
    const AlgebroidSpec s = k % 2 ? oracle::rot3() : oracle::aff2();
    std::mt19937_64 rng(1000 + k);
    const NonlinearConnection conn = oracle::random_connection(s.m, s.p_rank, s.r_rank, rng);
    run_all(s, conn, oracle::random_metric(s, 2000 + k), rng, unit_box(100, 3000 + k));
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < kCompatSeconds;
  return {pass, std::to_string(runs) + " constructions, max residual " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome berwald_riemannian() {
  double worst = 0.0, vertical = 0.0;
  bool labels = true;
  int metrics = 0;
  auto compare = [&](const AlgebroidSpec& s, const NonlinearConnection& conn, const PseudoMetric& G, std::uint64_t seed) {
    const MetricClassification c = classify(G, s.m, unit_box(100, seed));
    labels = labels && c.horizontal.label == "Riemannian" && c.vertical.label == "Riemannian";
    const DistinguishedConnection a = metrizable_berwald(s, conn, G), b = riemannian_berwald(s, conn, G);
    for (const Point& pt : sample_points(s.m, s.r_rank, 100, seed, {1.0, kFiberEpsilon, 1.0})) {
      const DlcValues vb = b(pt);
      worst = std::max(worst, a(pt).max_abs_diff(vb));
      for (double v : vb.vh) vertical = std::max(vertical, std::abs(v));
      for (double v : vb.vv) vertical = std::max(vertical, std::abs(v));
    }
    ++metrics;
  };
  {
    const Scenario s = parse_scenario(example_source("exp-metric"));
    compare(s.spec, s.connection, PseudoMetric::from_exprs(2, 2, *s.g_h, *s.g_v), 5);
  }
  for (std::uint64_t k = 0; k < 10; ++k) {
    const AlgebroidSpec s = k % 2 ? oracle::rot3() : oracle::aff2();
    std::mt19937_64 rng(4000 + k);
    compare(s, oracle::random_connection(s.m, s.p_rank, s.r_rank, rng), oracle::random_metric(s, 5000 + k, false),
            6000 + k);
  }
  const bool pass = labels && worst < kAgreementTol && vertical == 0.0;
  return {pass, std::to_string(metrics) + " metrics, max difference " + fmt(worst) + ", max vertical " + fmt(vertical) +
                    (labels ? "" : ", NOT all Riemannian")};
}

Outcome obata_projectors() {
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const AlgebroidSpec s = k % 2 ? oracle::rot3() : oracle::aff2();
    const auto O = obata(oracle::random_metric(s, 7000 + k));
    for (const Point& pt : sample_points(s.m, s.r_rank, 50, 8000 + k, {1.0, kFiberEpsilon, 1.0}))
      for (double v : obata_projector_residuals(O(pt))) worst = std::max(worst, v);
  }
  return {worst < kObataTol, "10 metrics x 50 points, max residual " + fmt(worst)};
}

Outcome torsion_round_trip() {
  double worst = 0.0;
  bool pass = true;
  int count = 0;
  for (const auto& s : {oracle::aff2(), oracle::rot3()}) {
    std::mt19937_64 rng(9000 + s.r_rank);
    const NonlinearConnection conn = oracle::random_connection(s.m, s.p_rank, s.r_rank, rng);
    const PseudoMetric G = oracle::random_metric(s, 9100 + s.r_rank);
    for (std::uint64_t k = 0; k < 20; ++k) {
      const CheckReport rep =
          check_torsion_roundtrip(s, conn, G.g_v, random_prescription(s.r_rank, 9200 + k), unit_box(20, k));
      worst = std::max(worst, rep.max_residual);
      pass = pass && rep.pass && rep.max_residual < kTorsionTol;
      ++count;
    }
  }
  return {pass, std::to_string(count) + " prescriptions (ranks 2, 3), max residual " + fmt(worst)};
}

Outcome levi_civita_spot() {
  const AlgebroidSpec s = oracle::classical(2);
  const auto gv = oracle::parse_all({"(exp x1)", "0", "0", "(exp x2)"}, 2, 2);
  const NormalConnection lc = levi_civita_normal(s, NonlinearConnection::zero(2, 2), FieldVec::from_exprs(gv));
  double worst = 0.0;
  for (const Point& pt : sample_points(2, 2, 50, 10)) {
    const NormalValues v = lc(pt);
    auto gt = [](int a, int b) -> oracle::Scalar {
      return [a, b](const Point& q) { return a == b ? std::exp(-q.x[a]) : 0.0; };
    };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double fd = 0.0;
          for (int h = 0; h < 2; ++h)
            fd += 0.5 * eval_value(gv[i * 2 + h], pt) *
                  (oracle::fd1(gt(h, k), pt, j) + oracle::fd1(gt(j, h), pt, k) - oracle::fd1(gt(j, k), pt, h));
          const double exact = (i == j && j == k) ? -0.5 : 0.0;
          worst = std::max({worst, std::abs(v.H(i, j, k) - fd), std::abs(v.H(i, j, k) - exact)});
          worst = std::max(worst, std::abs(v.V(i, j, k)));
        }
  }
  return {worst < kSpotTol, "H111 = H222 = -0.5, others 0, V = 0; max deviation " + fmt(worst)};
}

Outcome algebroid_axioms() {
  const Scenario so3 = parse_scenario(example_source("so3-bundle"));
  const CheckReport good = check_algebroid(so3.spec, oracle::options(100, 1));
  AlgebroidSpec bad = so3.spec;
  // [e1, e2] = e3 + e1 leaves e2 as the Jacobi sum.
  bad.L[(0 * 3 + 0) * 3 + 1] = Expr(1.0);
  bad.L[(0 * 3 + 1) * 3 + 0] = Expr(-1.0);
  const CheckReport broken = check_algebroid(bad, oracle::options(100, 1));
  const bool pass = good.pass && good.max_residual < kAxiomTol && !broken.pass && broken.max_residual >= kMutationFloor;
  return {pass, "so3 residual " + fmt(good.max_residual) + ", mutated residual " + fmt(broken.max_residual)};
}

Outcome transformation_laws() {
  const RunResult res = run_example("chart-change-diag");
  double worst = 0.0;
  bool pass = res.all_pass() && res.reports.size() == 2;
  for (const auto& r : res.reports) worst = std::max(worst, r.max_residual);
  pass = pass && worst < kLawTol;
  const Scenario s = parse_scenario(example_source("chart-change-diag"));
  const DualGeometry geo(s.spec, s.connection);
  const DistinguishedConnection d = berwald(s.spec, s.connection);
  const ChartTransition id = ChartTransition::identity(2, 2, 2);
  double ident = 0.0;
  for (const Point& pt : sample_points(2, 2, 100, 12)) {
    const auto g = nlc_law(geo, id, pt), g0 = geo.frame(pt).gamma;
    for (std::size_t k = 0; k < g.size(); ++k) ident = std::max(ident, std::abs(g[k] - g0[k]));
    ident = std::max(ident, dlc_law(geo, d(pt), id, pt).max_abs_diff(d(pt)));
  }
  pass = pass && ident < kIdentityTol;
  return {pass, "law residual " + fmt(worst) + ", identity deviation " + fmt(ident)};
}

Outcome jet_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::RandomExpr gen(2, 2, 2024);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  int done = 0;
  while (done < 1000) {
    const Expr e = gen(6);
    const Point pt{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const Jet j = eval_jet(e, pt, 3);
    const auto f = oracle::of(e);
    for (int a = 0; a < 4; ++a) {
      e1 = std::max(e1, oracle::rel_err(j.d(a), oracle::fd1(f, pt, a)));
      for (int b = a; b < 4; ++b) {
        e2 = std::max(e2, oracle::rel_err(j.d(a, b), oracle::fd2(f, pt, a, b)));
        for (int c = b; c < 4; ++c) e3 = std::max(e3, oracle::rel_err(j.d(a, b, c), oracle::fd3(f, pt, a, b, c)));
      }
    }
    ++done;
  }
  const double secs = seconds_since(t0);
  const bool pass = e1 < kJet1Tol && e2 < kJet2Tol && e3 < kJet3Tol && secs < kJetSeconds;
  return {pass, "1000 expressions, max relative error " + fmt(e1) + " / " + fmt(e2) + " / " + fmt(e3) + ", " +
                    fmt(secs) + " s"};
}

Outcome cartan_certification() {
  const Scenario s = parse_scenario(example_source("cartan-finsler"));
  const CheckReport rep = check_homogeneity(*s.fundamental, 2, 2, oracle::options(100, 11));
  const bool definite = rep.notes.find("(positive definite)") != std::string::npos;
  const bool positive = rep.notes.find("(positive)") != std::string::npos;
  double min_norm = INFINITY;
  for (const Point& pt : sample_points(2, 2, 100, 11)) min_norm = std::min(min_norm, std::hypot(pt.p[0], pt.p[1]));
  const bool pass = rep.pass && rep.max_residual < kEulerTol && definite && positive && rep.samples_used == 100 &&
                    min_norm >= kFiberEpsilon;
  return {pass, "Euler residual " + fmt(rep.max_residual) + ", " + rep.notes};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"classical reduction", classical_reduction},
      {"metric compatibility", metric_compatibility},
      {"Berwald-Riemannian agreement", berwald_riemannian},
      {"Obata projectors", obata_projectors},
      {"torsion round trip", torsion_round_trip},
      {"Levi-Civita spot value", levi_civita_spot},
      {"algebroid axioms", algebroid_axioms},
      {"transformation laws", transformation_laws},
      {"jet correctness", jet_correctness},
      {"Cartan certification", cartan_certification},
  };
  int failed = 0, n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
