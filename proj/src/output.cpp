#include "geomech/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "geomech/errors.hpp"
#include "json.hpp"

namespace geomech {

namespace {

using nlohmann::ordered_json;

ordered_json value_or_null(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

std::ofstream open_for_write(const std::string& path) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for " + path + ": " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_csv(const TimeSeries& series, std::ostream& out) {
  for (std::size_t i = 0; i < series.columns.size(); ++i) {
    out << (i ? "," : "") << series.columns[i];
  }
  out << '\n';
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
}

std::string metrics_json(const MetricsSummary& m) {
  ordered_json j;
  j["scenario"] = m.scenario;
  j["kind"] = m.kind;
  j["energy_drift_max_rel"] = value_or_null(m.energy_drift_max_rel);
  j["momentum_drift_max"] = value_or_null(m.momentum_drift_max);
  j["orthogonality_defect_max"] = value_or_null(m.orthogonality_defect_max);
  j["settling_time_5pct"] = value_or_null(m.settling_time_5pct);
  j["settled"] = m.tracking ? ordered_json(m.settling_time_5pct.has_value()) : ordered_json(nullptr);
  j["steady_state_error"] = value_or_null(m.steady_state_error);
  j["newton_iters_mean"] = value_or_null(m.newton_iters_mean);
  ordered_json extras = ordered_json::object();
  for (const auto& [k, v] : m.extras) extras[k] = value_or_null(v);
  j["extras"] = extras;
  return j.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const std::string& csv_path, const std::string& metrics_path) {
  {
    std::ofstream csv = open_for_write(csv_path);
    write_csv(result.series, csv);
    if (!csv.flush()) throw IoError("failed writing " + csv_path);
  }
  std::ofstream js = open_for_write(metrics_path);
  js << metrics_json(result.metrics);
  if (!js.flush()) throw IoError("failed writing " + metrics_path);
}

}  // namespace geomech
