#include <algorithm>
#include <stdexcept>
#include <utility>

#include "dualgeo/scenario.hpp"

namespace dualgeo {

namespace {

struct Builtin {
  const char* name;
  std::string text;
};

// Generated at configure time from scenarios/<name>.json.
#include "builtin_data.inc"

}  // namespace

std::vector<std::string> list_examples() {
  std::vector<std::string> out;
  for (const Builtin& b : builtins()) out.emplace_back(b.name);
  return out;
}

const std::string& example_source(const std::string& name) {
  for (const Builtin& b : builtins())
    if (name == b.name) return b.text;
  throw std::out_of_range("unknown example '" + name + "'");
}

RunResult run_example(const std::string& name) { return run_scenario(parse_scenario(example_source(name)), name); }

}  // namespace dualgeo
