#include "dualgeo/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dualgeo {

using nlohmann::json;

ScenarioError::ScenarioError(std::string pointer, const std::string& what)
    : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(std::move(pointer)) {}

namespace {

class Reader {
 public:
  Reader(int m, int r) : m_(m), r_(r) {}

  static const json& at(const json& obj, const std::string& key, const std::string& ptr) {
    if (!obj.is_object() || !obj.contains(key)) throw ScenarioError(ptr + "/" + key, "required field is missing");
    return obj.at(key);
  }

  static int integer(const json& v, const std::string& ptr, int min) {
    if (!v.is_number_integer()) throw ScenarioError(ptr, "expected an integer");
    const auto n = v.get<long long>();
    if (n < min) throw ScenarioError(ptr, "must be at least " + std::to_string(min));
    return static_cast<int>(n);
  }

  Expr expr(const json& v, const std::string& ptr, bool allow_p = true) const {
    if (v.is_number()) return Expr(v.get<double>());
    if (!v.is_string()) throw ScenarioError(ptr, "expected an expression string");
    const std::string text = v.get<std::string>();
    Expr e;
    try {
      e = parse_expr(text, m_, r_);
    } catch (const ExprError& err) {
      throw ScenarioError(ptr, err.what());
    }
    if (!allow_p && e.references_p()) throw ScenarioError(ptr, "expression may depend on x only");
    return e;
  }

  // Nested arrays of the given shape, flattened row-major.
  std::vector<Expr> array(const json& v, const std::string& ptr, std::vector<int> shape, bool allow_p = true) const {
    std::vector<Expr> out;
    walk(v, ptr, shape, 0, out, allow_p);
    return out;
  }

 private:
  void walk(const json& v, const std::string& ptr, const std::vector<int>& shape, std::size_t level,
            std::vector<Expr>& out, bool allow_p) const {
    if (level == shape.size()) {
      out.push_back(expr(v, ptr, allow_p));
      return;
    }
    if (!v.is_array()) throw ScenarioError(ptr, "expected an array of length " + std::to_string(shape[level]));
    if (static_cast<int>(v.size()) != shape[level])
      throw ScenarioError(ptr, "expected length " + std::to_string(shape[level]) + ", got " + std::to_string(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k)
      walk(v[k], ptr + "/" + std::to_string(k), shape, level + 1, out, allow_p);
  }

  int m_, r_;
};

DlcExprs read_dlc(const Reader& rd, const json& v, const std::string& ptr, int p, int r) {
  DlcExprs d = DlcExprs::zero(p, r);
  if (!v.is_object()) throw ScenarioError(ptr, "expected an object with Hh, Hv, Vh, Vv");
  for (const auto& [key, _] : v.items())
    if (key != "Hh" && key != "Hv" && key != "Vh" && key != "Vv") throw ScenarioError(ptr + "/" + key, "unknown field");
  if (v.contains("Hh")) d.hh = rd.array(v["Hh"], ptr + "/Hh", {p, p, p});
  if (v.contains("Hv")) d.hv = rd.array(v["Hv"], ptr + "/Hv", {r, r, p});
  if (v.contains("Vh")) d.vh = rd.array(v["Vh"], ptr + "/Vh", {p, p, r});
  if (v.contains("Vv")) d.vv = rd.array(v["Vv"], ptr + "/Vv", {r, r, r});
  return d;
}

const std::vector<std::string> kKnownFields = {
    "name", "dims", "algebroid", "connection", "dlc0", "metric", "hamiltonian", "cartan", "deformation",
    "torsion", "transitions", "checks", "samples", "seed", "tol", "hessian_half"};

bool needs_metric(const std::string& c) {
  return c == "compatibility" || c == "classify" || c.rfind("build:", 0) == 0 || c == "regularity" ||
         c == "homogeneity" || c == "torsion-roundtrip";
}

bool needs_normal(const std::string& c) {
  return c == "regularity" || c == "homogeneity" || c == "build:levi-civita" || c == "torsion-roundtrip";
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (std::find(kKnownFields.begin(), kKnownFields.end(), key) == kKnownFields.end())
      throw ScenarioError("/" + key, "unknown field");

  Scenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ScenarioError("/name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  const json& dims = Reader::at(doc, "dims", "");
  const int m = Reader::integer(Reader::at(dims, "m", "/dims"), "/dims/m", 1);
  const int p = Reader::integer(Reader::at(dims, "p_rank", "/dims"), "/dims/p_rank", 1);
  const int r = Reader::integer(Reader::at(dims, "r_rank", "/dims"), "/dims/r_rank", 1);
  const Reader rd(m, r);

  s.spec.m = m;
  s.spec.p_rank = p;
  s.spec.r_rank = r;
  const json& alg = Reader::at(doc, "algebroid", "");
  s.spec.rho = rd.array(Reader::at(alg, "rho", "/algebroid"), "/algebroid/rho", {p, m}, false);
  if (alg.contains("L"))
    s.spec.L = rd.array(alg["L"], "/algebroid/L", {p, p, p}, false);
  else
    s.spec.L.assign(p * p * p, Expr());
  if (alg.contains("h")) s.spec.h_map = rd.array(alg["h"], "/algebroid/h", {m}, false);
  if (alg.contains("eta")) s.spec.eta_map = rd.array(alg["eta"], "/algebroid/eta", {m}, false);

  s.connection = NonlinearConnection::zero(r, p);
  if (doc.contains("connection")) s.connection.gamma = rd.array(doc["connection"], "/connection", {r, p});

  if (doc.contains("dlc0")) {
    if (doc["dlc0"].is_string()) {
      if (doc["dlc0"].get<std::string>() != "berwald") throw ScenarioError("/dlc0", "expected \"berwald\" or an object");
      s.dlc0_berwald = true;
    } else {
      s.dlc0 = read_dlc(rd, doc["dlc0"], "/dlc0", p, r);
    }
  }

  int sources = 0;
  if (doc.contains("metric")) {
    ++sources;
    const json& g = doc["metric"];
    s.g_h = rd.array(Reader::at(g, "g_h", "/metric"), "/metric/g_h", {p, p});
    s.g_v = rd.array(Reader::at(g, "g_v", "/metric"), "/metric/g_v", {r, r});
  }
  if (doc.contains("hamiltonian")) {
    ++sources;
    s.fundamental = HamiltonFunction{rd.expr(doc["hamiltonian"], "/hamiltonian"), FunctionKind::Hamilton};
  }
  if (doc.contains("cartan")) {
    ++sources;
    s.fundamental = HamiltonFunction{rd.expr(doc["cartan"], "/cartan"), FunctionKind::Cartan};
  }
  if (sources > 1) throw ScenarioError("", "metric, hamiltonian and cartan are mutually exclusive");

  if (doc.contains("deformation")) {
    const json& d = doc["deformation"];
    if (!d.is_object()) throw ScenarioError("/deformation", "expected an object with X_h, X_v, Y_h, Y_v");
    DlcExprs e = DlcExprs::zero(p, r);
    for (const auto& [key, _] : d.items())
      if (key != "X_h" && key != "X_v" && key != "Y_h" && key != "Y_v")
        throw ScenarioError("/deformation/" + key, "unknown field");
    if (d.contains("X_h")) e.hh = rd.array(d["X_h"], "/deformation/X_h", {p, p, p});
    if (d.contains("X_v")) e.vh = rd.array(d["X_v"], "/deformation/X_v", {p, p, r});
    if (d.contains("Y_h")) e.hv = rd.array(d["Y_h"], "/deformation/Y_h", {r, r, p});
    if (d.contains("Y_v")) e.vv = rd.array(d["Y_v"], "/deformation/Y_v", {r, r, r});
    s.deformation = std::move(e);
  }

  if (doc.contains("torsion")) {
    const json& t = doc["torsion"];
    TorsionPrescription P = TorsionPrescription::zero(r);
    if (!t.is_object()) throw ScenarioError("/torsion", "expected an object with T, S");
    if (t.contains("T")) P.T = rd.array(t["T"], "/torsion/T", {r, r, r});
    if (t.contains("S")) P.S = rd.array(t["S"], "/torsion/S", {r, r, r});
    s.torsion = std::move(P);
  }

  if (doc.contains("transitions")) {
    const json& ts = doc["transitions"];
    if (!ts.is_array()) throw ScenarioError("/transitions", "expected an array");
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const std::string ptr = "/transitions/" + std::to_string(k);
      ChartTransition t = ChartTransition::identity(m, p, r);
      if (ts[k].contains("Lambda")) t.Lambda = rd.array(ts[k]["Lambda"], ptr + "/Lambda", {p, p}, false);
      if (ts[k].contains("M")) t.M = rd.array(ts[k]["M"], ptr + "/M", {r, r}, false);
      if (ts[k].contains("jacobian")) t.base_jacobian = rd.array(ts[k]["jacobian"], ptr + "/jacobian", {m, m}, false);
      s.transitions.push_back(std::move(t));
    }
  }

  const json& checks = Reader::at(doc, "checks", "");
  if (!checks.is_array()) throw ScenarioError("/checks", "expected an array of check names");
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const std::string ptr = "/checks/" + std::to_string(k);
    if (!checks[k].is_string()) throw ScenarioError(ptr, "expected a check name");
    const std::string c = checks[k].get<std::string>();
    const auto& vocab = check_vocabulary();
    if (std::find(vocab.begin(), vocab.end(), c) == vocab.end()) throw ScenarioError(ptr, "unknown check '" + c + "'");
    if (needs_metric(c) && sources == 0)
      throw ScenarioError(ptr, "check '" + c + "' needs one of metric, hamiltonian or cartan");
    if (needs_normal(c) && p != r) throw ScenarioError(ptr, "check '" + c + "' needs p_rank == r_rank");
    if ((c == "regularity" || c == "homogeneity") && !s.fundamental)
      throw ScenarioError(ptr, "check '" + c + "' needs a hamiltonian or cartan function");
    if (c == "homogeneity" && s.fundamental->kind != FunctionKind::Cartan)
      throw ScenarioError(ptr, "homogeneity needs a cartan function");
    s.checks.push_back(c);
  }

  if (doc.contains("samples")) s.options.samples = Reader::integer(doc["samples"], "/samples", 1);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ScenarioError("/seed", "expected a non-negative integer");
    s.options.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) throw ScenarioError("/tol", "expected a positive number");
    s.options.tol = doc["tol"].get<double>();
  }
  if (doc.contains("hessian_half")) {
    if (!doc["hessian_half"].is_boolean()) throw ScenarioError("/hessian_half", "expected true or false");
    s.hessian_half = doc["hessian_half"].get<bool>();
  }

  try {
    s.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError("/algebroid", e.what());
  }
  for (std::size_t k = 0; k < s.transitions.size(); ++k) {
    try {
      s.transitions[k].validate(m, p, r);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("/transitions/" + std::to_string(k), e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

bool RunResult::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

namespace {

class Runner {
 public:
  explicit Runner(const Scenario& s) : s_(s) {
    if (s.g_h) {
      G_ = PseudoMetric::from_exprs(s.p(), s.r(), *s.g_h, *s.g_v);
      g_v_ = G_->g_v;
    } else if (s.fundamental) {
      g_v_ = hessian_metric_field(*s.fundamental, s.r(), s.hessian_half);
      if (s.p() == s.r()) G_ = induced_metric(*g_v_, s.r());
    }
  }

  CheckReport run(const std::string& c) {
    const CheckOptions& opt = s_.options;
    if (c == "algebroid-axioms") return check_algebroid(s_.spec, opt);
    if (c == "tangent-jacobi") return check_tangent(s_.spec, opt);
    if (c == "nlc-law") return check_nlc_law(s_.spec, s_.connection, transitions(), opt);
    if (c == "dlc-law") return check_dlc_law(s_.spec, s_.connection, current(), transitions(), opt);
    if (c == "compatibility")
      return check_compatibility(s_.spec, s_.connection, current(), built_metric_ ? *built_metric_ : metric(), opt);
    if (c == "classify") return check_classify(metric(), s_.m(), opt);
    if (c == "build:metrizable-from") return build(c, metrizable_from(s_.spec, s_.connection, start(), metric()));
    if (c == "build:metrizable-berwald") return build(c, metrizable_berwald(s_.spec, s_.connection, metric()));
    if (c == "build:obata-family") {
      const DeformationTensors D = s_.deformation ? DeformationTensors::from_exprs(s_.p(), s_.r(), *s_.deformation)
                                                  : DeformationTensors::zero(s_.p(), s_.r());
      return build(c, metrizable_family(s_.spec, s_.connection, metric(), D));
    }
    if (c == "build:deformation") return build(c, metrizable_deformation(s_.spec, s_.connection, start(), metric()));
    if (c == "regularity") return check_regularity(*s_.fundamental, s_.m(), s_.r(), opt, s_.hessian_half);
    if (c == "homogeneity") return check_homogeneity(*s_.fundamental, s_.m(), s_.r(), opt, s_.hessian_half);
    if (c == "build:levi-civita") {
      const NormalConnection lc = levi_civita_normal(s_.spec, s_.connection, *g_v_);
      return build(c, lc.to_dlc(), induced_metric(*g_v_, s_.r()));
    }
    if (c == "torsion-roundtrip") {
      const TorsionPrescription P = s_.torsion ? *s_.torsion : random_prescription(s_.r(), opt.seed);
      return check_torsion_roundtrip(s_.spec, s_.connection, *g_v_, P, opt);
    }
    throw std::invalid_argument("unknown check '" + c + "'");
  }

  const std::optional<DistinguishedConnection>& built() const { return built_; }

 private:
  std::vector<ChartTransition> transitions() const {
    if (!s_.transitions.empty()) return s_.transitions;
    return {ChartTransition::identity(s_.m(), s_.p(), s_.r())};
  }

  const PseudoMetric& metric() const {
    if (!G_) throw std::invalid_argument("no metric is available for this check");
    return *G_;
  }

  DistinguishedConnection start() const {
    if (s_.dlc0_berwald) return berwald(s_.spec, s_.connection);
    if (s_.dlc0) return DistinguishedConnection::from_exprs(s_.p(), s_.r(), *s_.dlc0);
    return DistinguishedConnection::zero(s_.p(), s_.r());
  }

  DistinguishedConnection current() const { return built_ ? *built_ : start(); }

  CheckReport build(const std::string& name, DistinguishedConnection d) { return build(name, std::move(d), metric()); }

  CheckReport build(const std::string& name, DistinguishedConnection d, const PseudoMetric& G) {
    built_ = d;
    built_metric_ = G;
    return check_compatibility(s_.spec, s_.connection, d, G, s_.options, name);
  }

  const Scenario& s_;
  std::optional<PseudoMetric> G_;
  std::optional<FieldVec> g_v_;
  std::optional<DistinguishedConnection> built_;
  std::optional<PseudoMetric> built_metric_;  // the metric the last build was made for
};

ConnectionDump dump_connection(const Scenario& s, const DistinguishedConnection& d) {
  ConnectionDump out;
  out.available = true;
  out.p = d.p();
  out.r = d.r();
  if (d.exprs()) {
    out.exprs = *d.exprs();
    return out;
  }
  out.points = sample_points(s.m(), s.r(), std::min(s.options.samples, 10), s.options.seed, s.options.box);
  for (const Point& pt : out.points) out.values.push_back(d(pt));
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const std::string& label) {
  RunResult res;
  res.scenario = label;
  res.seed = s.options.seed;
  Runner runner(s);
  for (const std::string& c : s.checks) {
    try {
      res.reports.push_back(runner.run(c));
    } catch (const std::exception& e) {
      CheckReport rep;
      rep.name = c;
      rep.pass = false;
      rep.max_residual = std::numeric_limits<double>::infinity();
      rep.notes = std::string("error: ") + e.what();
      res.reports.push_back(std::move(rep));
    }
  }
  if (runner.built()) {
    try {
      res.connection = dump_connection(s, *runner.built());
    } catch (const std::exception&) {
      res.connection = ConnectionDump{};
    }
  }
  return res;
}

}  // namespace dualgeo
