#pragma once

// End-to-end orchestration: decompose -> allocate -> generate problems ->
// plan/replan -> validate -> combine -> symbolic execution, with run-directory
// persistence of every intermediate artifact.

#include "mrplan/combine.hpp"

namespace mrplan {

struct PipelineConfig {
  std::string provider = "mock";  // mock | replay | live
  std::filesystem::path fixtures;      // mock: directory of *.fixtures files
  std::filesystem::path transcripts;   // replay: transcripts of a previous run
  std::string endpoint;                // live
  std::string credential_env = "MRPLAN_API_KEY";
  SearchConfig search;
  int max_retries = 3;
  std::filesystem::path run_dir;  // empty = no persistence
  bool dry_run = false;           // stop after problem generation
  GroundOptions ground;
};

struct PipelineError : std::runtime_error {
  PipelineError(std::string stage_name, const std::string& message)
      : std::runtime_error(stage_name + ": " + message), stage(std::move(stage_name)) {}
  std::string stage;
};

struct UnitResult {
  std::string subtask;
  int subtask_ordinal = 0;
  std::string robot;
  Problem problem;
  GroundTask task;
  Plan plan;
  bool plan_from_provider = false;
};

struct SymbolicExecution {
  int executed = 0;
  int executable = 0;
  int transitions = 0;
  State final_state;
  std::vector<std::string> failed_steps;  // rendered, for debugging
};

struct PipelineResult {
  Decomposition decomposition;
  Allocation allocation;
  std::vector<UnitResult> units;
  DependencyGraph graph;
  Schedule sched;
  ExecutionTrace trace;
  GroundTask merged;  // union task the trace replays against
  SymbolicExecution execution;
  bool success = false;
  std::vector<std::string> missing_goals;
};

std::unique_ptr<LmProvider> make_provider(const PipelineConfig& config);

// goal_conditions: success criteria for the run; empty = union of subtask
// goals from the decomposition. Throws PipelineError with the failing stage.
PipelineResult run_pipeline(const std::string& instruction, const Scene& scene,
                            const std::vector<RobotProfile>& robots, const std::string& scenario,
                            const LmProvider& provider, const PipelineConfig& config,
                            const std::vector<Literal>& goal_conditions = {});

// Merged domain/problem over all robots (shared schemas must agree).
Domain merge_domains(const std::vector<RobotProfile>& robots);
Problem merged_problem(const Scene& scene, const std::vector<RobotProfile>& robots,
                       const std::vector<Literal>& goals);

// Replays a trace through apply() on the merged task, skipping failed steps.
SymbolicExecution replay_trace(const GroundTask& merged, const ExecutionTrace& trace);

void persist_run(const PipelineResult& result, const TranscriptLog& transcripts,
                 const std::filesystem::path& run_dir);

}  // namespace mrplan
