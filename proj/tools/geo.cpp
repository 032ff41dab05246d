#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dualgeo/scenario.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "geo: cannot write " << path << "\n";
    return false;
  }
  return true;
}

void print_summary(const dualgeo::RunResult& res) {
  for (const auto& r : res.reports)
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  max_residual " << dualgeo::format_double(r.max_residual)
              << "  (" << r.notes << ")\n";
}

int emit(const dualgeo::RunResult& res, const std::string& report_path, const std::string& conn_path) {
  const std::string report = dualgeo::report_json(res);
  if (report_path.empty())
    std::cout << report;
  else if (!write_file(report_path, report))
    return 2;
  if (!conn_path.empty() && !write_file(conn_path, dualgeo::connection_json(res.connection))) return 2;
  print_summary(res);
  return res.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry checks on generalized Lie algebroid dual bundles"};
  app.require_subcommand(1);

  std::string path, report_path, conn_path;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  auto* check = app.add_subcommand("check", "Run the checks of a scenario file");
  check->add_option("scenario", path, "Scenario JSON file")->required();
  check->add_option("--samples", samples, "Number of sample points")->check(CLI::PositiveNumber);
  check->add_option("--tol", tol, "Residual tolerance")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "Sampling seed");
  check->add_option("--report", report_path, "Write the report JSON here instead of stdout");
  check->add_option("--dump-connection", conn_path, "Write the last constructed connection here");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("scenario", path, "Scenario JSON file")->required();

  auto* examples = app.add_subcommand("examples", "Built-in example scenarios");
  examples->require_subcommand(1);
  auto* list = examples->add_subcommand("list", "List the built-in examples");
  std::string name;
  auto* run = examples->add_subcommand("run", "Run a built-in example");
  run->add_option("name", name, "Example name")->required();
  run->add_option("--report", report_path, "Write the report JSON here instead of stdout");
  run->add_option("--dump-connection", conn_path, "Write the last constructed connection here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      dualgeo::Scenario s = dualgeo::load_scenario(path);
      if (samples) s.options.samples = *samples;
      if (tol) s.options.tol = *tol;
      if (seed) s.options.seed = *seed;
      return emit(dualgeo::run_scenario(s, path), report_path, conn_path);
    }
    if (*validate) {
      const dualgeo::Scenario s = dualgeo::load_scenario(path);
      std::cout << "ok: " << (s.name.empty() ? path : s.name) << " (m=" << s.m() << ", p_rank=" << s.p()
                << ", r_rank=" << s.r() << ", " << s.checks.size() << " checks)\n";
      return 0;
    }
    if (*list) {
      for (const auto& n : dualgeo::list_examples()) std::cout << n << "\n";
      return 0;
    }
    if (*run) return emit(dualgeo::run_example(name), report_path, conn_path);
  } catch (const dualgeo::ScenarioError& e) {
    std::cerr << "geo: invalid scenario at " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "geo: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
