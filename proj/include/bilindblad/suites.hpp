#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bilindblad/models.hpp"
#include "bilindblad/report.hpp"
#include "bilindblad/sectors.hpp"

namespace bilindblad::suites {

struct RunOptions {
  std::vector<std::string> suites;  // empty: every suite the model supports
  std::uint64_t seed = 7;
  sym::PencilMode mode = sym::PencilMode::Convex;
  std::vector<double> times = {0.1, 0.5, 1.0, 2.0};
  std::vector<double> hbars;  // empty: model default
  std::map<std::string, double> tolerances;  // per-check overrides
};

struct SuiteOutputs {
  report::SuiteReport report;
  std::vector<gksl::CoherenceRow> coherences;
  bool has_coherences = false;
  moyal::EgorovSweep sweep;
  bool has_sweep = false;
};

SuiteOutputs run_suite(const models::ModelFixture& model,
                       const RunOptions& options);

}  // namespace bilindblad::suites
