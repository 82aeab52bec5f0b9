#include "bilindblad/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bilindblad::report {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void SuiteReport::extend(std::vector<CheckRecord> rs) {
  for (auto& r : rs) checks.push_back(std::move(r));
}

bool SuiteReport::pass() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckRecord& r) { return r.status == "FAIL"; });
}

std::string SuiteReport::render(const std::string& header) const {
  std::vector<CheckRecord> sorted = checks;
  std::sort(sorted.begin(), sorted.end(),
            [](const CheckRecord& a, const CheckRecord& b) {
              return a.name < b.name;
            });
  std::ostringstream os;
  os << header << "\n";
  std::size_t failed = 0, prob = 0, skipped = 0;
  for (const auto& r : sorted) {
    os << r.status;
    for (std::size_t i = r.status.size(); i < 5; ++i) os << ' ';
    os << " " << r.name << "  residual=" << format_sci(r.residual)
       << "  tol=" << format_sci(r.tolerance);
    if (!r.anchor.empty()) os << "  [" << r.anchor << "]";
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
    if (r.status == "FAIL") ++failed;
    if (r.status == "prob") ++prob;
    if (r.status == "skip") ++skipped;
  }
  os << "checks=" << sorted.size() << " failed=" << failed
     << " probabilistic=" << prob << " skipped=" << skipped
     << " overall=" << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace bilindblad::report
