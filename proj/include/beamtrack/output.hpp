#pragma once

// CSV emission and plain-text reports for experiment results.

#include <string>

#include "beamtrack/config.hpp"

namespace beamtrack {

/// %.17g formatting; nan and inf are spelled "nan", "inf", "-inf".
std::string format_double(double v);

/// Writes one CSV per (algorithm, metric) series, one CSV per summary table,
/// notes.txt and config.resolved.json into `dir`, creating it if needed.
/// Files are staged under a temporary name and renamed once complete.
void write_outputs(const ExperimentResult& result, const RunConfig& cfg, const std::string& dir);

/// Human-readable summary of the tables and notes.
std::string report(const ExperimentResult& result);

}  // namespace beamtrack
