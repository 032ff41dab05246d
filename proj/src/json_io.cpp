#include <cmath>
#include <string>

#include "dualgeo/scenario.hpp"
#include "json.hpp"

namespace dualgeo {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

// Finite numbers print with 17 significant digits; JSON has no infinities,
// so those become strings.
std::string number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_double(v);
}

template <class T, class F>
std::string list(const std::vector<T>& items, F each) {
  std::string out = "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ", ";
    out += each(items[k]);
  }
  return out + "]";
}

std::string numbers(const std::vector<double>& v) { return list(v, number); }

std::string point(const Point& pt) { return "{\"x\": " + numbers(pt.x) + ", \"p\": " + numbers(pt.p) + "}"; }

// Flat row-major storage written back as nested arrays of the given shape.
template <class T, class F>
std::string nested(const std::vector<T>& flat, const std::vector<int>& shape, F each, std::size_t level = 0,
                   std::size_t offset = 0) {
  if (level == shape.size()) return each(flat[offset]);
  std::size_t stride = 1;
  for (std::size_t k = level + 1; k < shape.size(); ++k) stride *= shape[k];
  std::string out = "[";
  for (int k = 0; k < shape[level]; ++k) {
    if (k) out += ", ";
    out += nested(flat, shape, each, level + 1, offset + k * stride);
  }
  return out + "]";
}

}  // namespace

std::string report_json(const RunResult& result) {
  std::string out = "{\n  \"scenario\": " + quoted(result.scenario) + ",\n  \"seed\": " + std::to_string(result.seed) +
                    ",\n  \"reports\": [";
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    const CheckReport& r = result.reports[k];
    out += k ? ",\n" : "\n";
    out += "    {\"name\": " + quoted(r.name) + ", \"pass\": " + (r.pass ? "true" : "false") +
           ", \"max_residual\": " + number(r.max_residual) + ", \"worst_point\": " + point(r.worst_point) +
           ", \"samples_used\": " + std::to_string(r.samples_used) + ", \"notes\": " + quoted(r.notes) + "}";
  }
  out += result.reports.empty() ? "]" : "\n  ]";
  out += ",\n  \"all_pass\": " + std::string(result.all_pass() ? "true" : "false") + "\n}\n";
  return out;
}

std::string connection_json(const ConnectionDump& dump) {
  if (!dump.available) return "{}\n";
  const int p = dump.p, r = dump.r;
  const std::vector<int> shh{p, p, p}, shv{r, r, p}, svh{p, p, r}, svv{r, r, r};
  if (dump.exprs) {
    auto str = [](const Expr& e) { return quoted(e.str()); };
    const DlcExprs& e = *dump.exprs;
    return "{\n  \"Hh\": " + nested(e.hh, shh, str) + ",\n  \"Hv\": " + nested(e.hv, shv, str) +
           ",\n  \"Vh\": " + nested(e.vh, svh, str) + ",\n  \"Vv\": " + nested(e.vv, svv, str) + "\n}\n";
  }
  std::string out = "{\n  \"points\": " + list(dump.points, point) + ",\n  \"values\": {";
  auto family = [&](const char* name, auto get, const std::vector<int>& shape, bool last) {
    out += std::string("\n    \"") + name + "\": " +
           list(dump.values, [&](const DlcValues& v) { return nested(get(v), shape, number); }) + (last ? "" : ",");
  };
  family("Hh", [](const DlcValues& v) { return v.hh; }, shh, false);
  family("Hv", [](const DlcValues& v) { return v.hv; }, shv, false);
  family("Vh", [](const DlcValues& v) { return v.vh; }, svh, false);
  family("Vv", [](const DlcValues& v) { return v.vv; }, svv, true);
  return out + "\n  }\n}\n";
}

}  // namespace dualgeo
