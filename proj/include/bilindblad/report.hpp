#pragma once

#include <string>
#include <vector>

namespace bilindblad::report {

struct CheckRecord {
  std::string name;    // stable identifier, used for sorting
  std::string anchor;  // one-line description of what is verified
  std::string status;  // "pass" | "FAIL" | "prob" | "skip"
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct SuiteReport {
  std::vector<CheckRecord> checks;

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  void extend(std::vector<CheckRecord> rs);
  bool pass() const;

  /// Deterministic text rendering: checks sorted by name, fixed float
  /// formatting, no timestamps.
  std::string render(const std::string& header) const;
};

std::string format_sci(double v);

}  // namespace bilindblad::report
