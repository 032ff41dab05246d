#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dualgeo/field.hpp"

namespace dualgeo {

struct CheckReport {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  Point worst_point;
  int samples_used = 0;
  std::string notes;
};

// Accumulates named residual families over sample points and turns them
// into a report. A sample whose evaluation throws is recorded, not fatal.
class ResidualTracker {
 public:
  explicit ResidualTracker(std::string name) : name_(std::move(name)) {}

  // Registers a family so that it is listed in the notes even if it never
  // sees a nonzero residual.
  void family(const std::string& label);
  void record(const std::string& label, double residual, const Point& pt);
  void note(const std::string& text);
  void sample_failed(const Point& pt, const std::string& why);
  void sample_done() { ++samples_; }

  double family_max(const std::string& label) const;
  double overall_max() const { return max_; }
  int failed_samples() const { return failed_; }

  // pass iff every sample evaluated and the largest residual is below tol.
  CheckReport finish(double tol) const;
  // For checks whose verdict is not a residual comparison.
  CheckReport finish_with(bool pass) const;

  // Runs body at every point, catching evaluation errors per point.
  void for_each(const std::vector<Point>& pts, const std::function<void(const Point&)>& body);

 private:
  std::string notes_text() const;

  std::string name_;
  std::vector<std::pair<std::string, double>> families_;
  std::vector<std::string> notes_;
  double max_ = 0.0;
  Point worst_;
  bool have_worst_ = false;
  int samples_ = 0;
  int failed_ = 0;
  std::string first_failure_;
};

std::string format_double(double v);

}  // namespace dualgeo
