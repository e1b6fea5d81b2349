#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathgauge/report.hpp"
#include "pathgauge/surface.hpp"

namespace pathgauge {

/// Task identifiers accepted in a scenario, in documentation order.
const std::vector<std::string>& task_names();

/// Default tolerance of a task; absent for the informational halfpath demo.
std::optional<double> default_tolerance(const std::string& task);

struct Numerics {
  int Nt = 200;
  int Ns = 200;
  std::vector<int> N_list{50, 100, 200, 400};
  std::map<std::string, double> tolerances;  ///< per-task overrides
  int samples = 1000;                        ///< random trials for algebraic tasks
};

struct ReparamSpec {
  Reparametrization phi;
  bool enforce_condition = true;
};

/**
 * Parsed and validated scenario. Every family and task name is resolved at
 * parse time, so running it only raises task-level failures.
 */
struct Scenario {
  std::string name;
  std::string module_name;
  std::uint64_t seed = 1;
  FieldSet fields;
  std::string abar_family, a_family, b_family;
  PathMapPtr path;
  TangentMap variation;
  SurfaceMapPtr surface;
  std::string surface_family;
  std::optional<ReparamSpec> reparam;
  Numerics numerics;
  std::vector<std::string> tasks;

  double tolerance(const std::string& task) const;
};

/**
 * Parses the YAML scenario text. Throws ConfigParse (with line and key),
 * UnknownTask or UnknownFamily. seed_override replaces the scenario seed
 * before any random field is drawn.
 */
Scenario parse_scenario(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Throws ConfigParse when a task needs geometry the scenario lacks, UnknownTask for unknown names.
void validate_tasks(const Scenario& sc, const std::vector<std::string>& tasks);

/// Runs one task at grid size (Nt, Ns); task exceptions become failed records.
TaskResult run_task(const Scenario& sc, const std::string& task, int Nt, int Ns);

/// Runs the scenario's tasks (or the given override list) in order.
Report run_scenario(const Scenario& sc, const std::optional<std::vector<std::string>>& tasks = std::nullopt);
Report run_scenario(const std::string& config_text);

/// One row per (N, task), Nt = Ns = N, with the fitted log-log slope per task.
std::vector<ConvergenceRow> run_convergence(const Scenario& sc, const std::vector<int>& N_list,
                                            const std::optional<std::vector<std::string>>& tasks = std::nullopt);

}  // namespace pathgauge
