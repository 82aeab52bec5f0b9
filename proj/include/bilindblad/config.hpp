#pragma once

#include <string>

#include "bilindblad/models.hpp"

namespace bilindblad::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Serializes a fixture to the JSON config format (deterministic bytes).
std::string export_model(const models::ModelFixture& model);

/// Parses and validates a config document. Unknown keys are rejected;
/// semantic errors name the offending key path.
models::ModelFixture parse_config(const std::string& text);

}  // namespace bilindblad::config
