#pragma once

#include <ostream>
#include <string>

#include "geomech/simulation.hpp"

namespace geomech {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Header row, then one row per sample.
void write_csv(const TimeSeries& series, std::ostream& out);

/// Pretty-printed JSON; absent or non-finite metrics become null.
std::string metrics_json(const MetricsSummary& metrics);

/// Writes both files, creating parent directories. Throws IoError.
void write_outputs(const RunResult& result, const std::string& csv_path, const std::string& metrics_path);

}  // namespace geomech
