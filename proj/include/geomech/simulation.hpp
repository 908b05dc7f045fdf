#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomech/scenario.hpp"

namespace geomech {

/// Column-named table with one row per time node.
struct TimeSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;  // throws std::out_of_range
  std::vector<double> column(const std::string& name) const;
};

struct MetricsSummary {
  std::string scenario;
  std::string kind;
  std::optional<double> energy_drift_max_rel;
  std::optional<double> momentum_drift_max;
  std::optional<double> orthogonality_defect_max;
  std::optional<double> settling_time_5pct;  // empty when tracked but never settled
  bool tracking = false;                     // settling/steady-state fields apply
  std::optional<double> steady_state_error;
  std::optional<double> newton_iters_mean;
  std::vector<std::pair<std::string, double>> extras;  // kind-specific, in output order

  double extra(const std::string& key) const;  // throws std::out_of_range
};

struct RunResult {
  TimeSeries series;
  MetricsSummary metrics;
};

/// Deterministic: identical scenarios give identical results. Solver failures
/// surface as StepFailure carrying the step index and time.
RunResult run(const Scenario& scenario);

/// First time after which err stays below fraction * err[0] for the rest of
/// the run. Empty if the last sample is still outside the band.
std::optional<double> settling_time(const std::vector<double>& t, const std::vector<double>& err,
                                    double fraction = 0.05);

/// Mean of err over the final quarter of the samples.
double steady_state_mean(const std::vector<double>& err);

/// Least-squares slope of y against its index.
double regression_slope(const std::vector<double>& y);

/// Rotation angle between two attitudes.
double attitude_distance(const RotationMatrix& a, const RotationMatrix& b);

}  // namespace geomech
