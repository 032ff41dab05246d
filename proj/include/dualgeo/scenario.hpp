#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualgeo/hamilton.hpp"
#include "dualgeo/tangent.hpp"
#include "dualgeo/transition.hpp"

namespace dualgeo {

// Schema or expression error, located by a JSON pointer into the scenario.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string pointer, const std::string& what);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

inline const std::vector<std::string>& check_vocabulary() {
  static const std::vector<std::string> names = {
      "algebroid-axioms", "tangent-jacobi",          "nlc-law",           "dlc-law",
      "compatibility",    "classify",                "build:metrizable-from", "build:metrizable-berwald",
      "build:obata-family", "build:deformation",     "regularity",        "homogeneity",
      "build:levi-civita", "torsion-roundtrip"};
  return names;
}

struct Scenario {
  std::string name;
  AlgebroidSpec spec;
  NonlinearConnection connection;
  std::optional<DlcExprs> dlc0;
  bool dlc0_berwald = false;
  std::optional<std::vector<Expr>> g_h, g_v;
  std::optional<HamiltonFunction> fundamental;  // hamiltonian or cartan
  std::optional<DlcExprs> deformation;
  std::optional<TorsionPrescription> torsion;
  std::vector<ChartTransition> transitions;
  std::vector<std::string> checks;
  CheckOptions options;
  bool hessian_half = false;

  int m() const { return spec.m; }
  int p() const { return spec.p_rank; }
  int r() const { return spec.r_rank; }
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// Samples stored for a connection that has no symbolic form.
struct ConnectionDump {
  bool available = false;
  int p = 0, r = 0;
  std::optional<DlcExprs> exprs;
  std::vector<Point> points;
  std::vector<DlcValues> values;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<CheckReport> reports;
  ConnectionDump connection;

  bool all_pass() const;
};

// Runs the checks in declaration order; a check that throws becomes a
// failing report.
RunResult run_scenario(const Scenario& s, const std::string& label);

std::string report_json(const RunResult& result);
std::string connection_json(const ConnectionDump& dump);

std::vector<std::string> list_examples();
// Scenario text of a built-in; throws std::out_of_range for unknown names.
const std::string& example_source(const std::string& name);
RunResult run_example(const std::string& name);

}  // namespace dualgeo
