#include "dualgeo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

namespace dualgeo {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ResidualTracker::family(const std::string& label) {
  for (auto& f : families_)
    if (f.first == label) return;
  families_.emplace_back(label, 0.0);
}

void ResidualTracker::record(const std::string& label, double residual, const Point& pt) {
  if (std::isnan(residual)) residual = INFINITY;
  family(label);
  for (auto& f : families_)
    if (f.first == label) f.second = std::max(f.second, residual);
  if (!have_worst_ || residual > max_) {
    max_ = std::max(max_, residual);
    worst_ = pt;
    have_worst_ = true;
  }
}

void ResidualTracker::note(const std::string& text) { notes_.push_back(text); }

void ResidualTracker::sample_failed(const Point& pt, const std::string& why) {
  if (failed_ == 0) {
    first_failure_ = why;
    if (!have_worst_ || max_ == 0.0) {
      worst_ = pt;
      have_worst_ = true;
    }
  }
  ++failed_;
}

double ResidualTracker::family_max(const std::string& label) const {
  for (const auto& f : families_)
    if (f.first == label) return f.second;
  return 0.0;
}

void ResidualTracker::for_each(const std::vector<Point>& pts, const std::function<void(const Point&)>& body) {
  for (const Point& pt : pts) {
    try {
      body(pt);
      sample_done();
    } catch (const std::exception& e) {
      sample_failed(pt, e.what());
    }
  }
}

std::string ResidualTracker::notes_text() const {
  std::string out;
  auto add = [&](const std::string& s) {
    if (!out.empty()) out += "; ";
    out += s;
  };
  for (const auto& [label, value] : families_) add(label + " " + format_double(value));
  for (const auto& n : notes_) add(n);
  if (failed_ > 0) add(std::to_string(failed_) + " sample(s) failed to evaluate, first: " + first_failure_);
  return out;
}

CheckReport ResidualTracker::finish(double tol) const {
  return finish_with(failed_ == 0 && max_ < tol);
}

CheckReport ResidualTracker::finish_with(bool pass) const {
  CheckReport r;
  r.name = name_;
  r.pass = pass && failed_ == 0;
  r.max_residual = max_;
  r.worst_point = worst_;
  r.samples_used = samples_;
  r.notes = notes_text();
  return r;
}

}  // namespace dualgeo
