#include "pathgauge/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pathgauge/error.hpp"

namespace pathgauge {

bool Report::all_pass() const {
  for (const TaskResult& t : tasks)
    if (!t.pass) return false;
  return true;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
  for (const TaskResult& t : r.tasks) {
    nlohmann::ordered_json j;
    j["task"] = t.task;
    j["residual"] = t.residual;
    j["tolerance"] = t.tolerance ? nlohmann::ordered_json(*t.tolerance) : nlohmann::ordered_json(nullptr);
    j["pass"] = t.pass;
    j["wall_time"] = t.wall_time;
    j["details"] = t.details;
    tasks.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["scenario"] = r.scenario;
  out["tasks"] = std::move(tasks);
  out["environment"] = {{"version", r.version}, {"precision", r.precision}};
  return out;
}

Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    for (const auto& t : j.at("tasks")) {
      TaskResult task;
      task.task = t.at("task").get<std::string>();
      task.residual = t.at("residual").get<double>();
      if (!t.at("tolerance").is_null()) task.tolerance = t.at("tolerance").get<double>();
      task.pass = t.at("pass").get<bool>();
      task.wall_time = t.at("wall_time").get<double>();
      task.details = t.at("details");
      r.tasks.push_back(std::move(task));
    }
    r.version = j.at("environment").at("version").get<std::string>();
    r.precision = j.at("environment").at("precision").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, std::string("report: ") + e.what());
  }
  return r;
}

std::string emit_report(const Report& r) { return to_json(r).dump(2) + "\n"; }

Report parse_report(const std::string& text) {
  try {
    return report_from_json(nlohmann::ordered_json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, std::string("report: ") + e.what());
  }
}

std::optional<double> loglog_slope(const std::vector<int>& N, const std::vector<double>& residual) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < N.size(); ++k)
    if (residual[k] > 0.0 && std::isfinite(residual[k])) {
      x.push_back(std::log(static_cast<double>(N[k])));
      y.push_back(-std::log(residual[k]));
    }
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string emit_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "N,task,residual,slope\n";
  char buf[64];
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.residual);
    out << r.N << ',' << r.task << ',' << buf << ',';
    if (r.slope) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.slope);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pathgauge
