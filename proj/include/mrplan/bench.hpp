#pragma once

// Task-suite loading, end-to-end suite execution, and the five evaluation
// metrics (SR, Exe, GCR, RU, Eff) with cross-report aggregate improvements.

#include <map>

#include "mrplan/pipeline.hpp"

namespace mrplan {

struct TaskSpec {
  std::string id;
  std::string category;  // compound | complex | vague
  std::string instruction;
  Scene scene;
  std::vector<RobotProfile> robots;
  std::vector<Literal> goal_conditions;  // ground-truth final conditions
  int gt_timesteps = 1;                  // ground-truth schedule makespan
  int gt_transitions = 1;                // ground-truth state-transition count
};

struct SuiteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Schema-validated load; errors carry the element path (e.g. "tasks[3].category").
std::vector<TaskSpec> load_task_suite(const std::filesystem::path& file,
                                      Diagnostics* warnings = nullptr);

struct RunRecord {
  std::string task_id;
  bool success = false;
  int executed = 0;     // trace records
  int executable = 0;   // records whose preconditions held during replay
  int makespan = 0;     // achieved timestep count
  int transitions = 0;  // applied records that changed the state
  std::vector<std::string> final_state;    // rendered atoms, sorted
  std::vector<std::string> missing_goals;  // rendered literals
  std::string failure;                     // stage error for aborted runs
};

std::string records_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_json(const std::string& text);

struct MetricValues {
  double sr = 0, exe = 0, gcr = 0, ru = 0, eff = 0;
  bool ru_eff_defined = false;  // false when no successful runs exist
  int tasks = 0;
};

struct MetricsReport {
  std::map<std::string, MetricValues> per_category;
  MetricValues overall;
};

std::vector<RunRecord> run_suite(const std::vector<TaskSpec>& suite, const PipelineConfig& config,
                                 const LmProvider& provider);

// Requires exactly one record per suite task.
MetricsReport compute_metrics(const std::vector<RunRecord>& records,
                              const std::vector<TaskSpec>& suite);

// Aligned table mirroring the (SR, Exe, GCR, RU, Eff) column order.
std::string render_report(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

struct Gain {
  double ours = 0;
  double baseline = 0;
  double relative = 0;   // (ours - baseline) / baseline
  bool unbounded = false;  // baseline was 0
};

// Weighted per-category averages of each metric and the relative gains.
std::map<std::string, Gain> aggregate_improvement(const MetricsReport& ours,
                                                  const MetricsReport& baseline,
                                                  const std::map<std::string, double>& weights);

std::string render_gains(const std::map<std::string, Gain>& gains);

}  // namespace mrplan
