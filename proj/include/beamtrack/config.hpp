#pragma once

// JSON run configuration: parsing, validation and the resolved echo.

#include <string>

#include "beamtrack/harness.hpp"

namespace beamtrack {

struct RunConfig {
  ExperimentSpec spec;
  std::string output_dir = "out";
  bool seed_was_random = false;
};

/// Defaults for a subcommand before any file or override is applied.
RunConfig default_config(ExperimentKind kind);

/// Parses `text` over the defaults of `kind`. Unknown keys and invalid values
/// throw Error(Config) whose field() is the dotted key path.
RunConfig parse_config(ExperimentKind kind, const std::string& text);

/// Fully resolved configuration as indented JSON; parse_config of the output
/// reproduces the same spec.
std::string to_json(const RunConfig& cfg);

std::optional<ExperimentKind> parse_kind(const std::string& s);

}  // namespace beamtrack
