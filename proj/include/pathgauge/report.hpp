#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pathgauge {

inline constexpr const char* kVersion = "0.1.0";

struct TaskResult {
  std::string task;
  double residual = 0.0;
  std::optional<double> tolerance;  ///< absent for informational tasks, which always pass
  bool pass = true;
  double wall_time = 0.0;  ///< seconds
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool operator==(const TaskResult&) const = default;
};

struct Report {
  std::string scenario;
  std::vector<TaskResult> tasks;
  std::string version = kVersion;
  std::string precision = "float64";

  bool all_pass() const;
  bool operator==(const Report&) const = default;
};

nlohmann::ordered_json to_json(const Report& r);
Report report_from_json(const nlohmann::ordered_json& j);
/// Pretty-printed JSON text with a trailing newline.
std::string emit_report(const Report& r);
Report parse_report(const std::string& text);

struct ConvergenceRow {
  int N = 0;
  std::string task;
  double residual = 0.0;
  std::optional<double> slope;
};

/// Least-squares slope of -log(residual) against log(N); absent with fewer than two usable points.
std::optional<double> loglog_slope(const std::vector<int>& N, const std::vector<double>& residual);

/// Header N,task,residual,slope; the slope cell is empty when absent.
std::string emit_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace pathgauge
