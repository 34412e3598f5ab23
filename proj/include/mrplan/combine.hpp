#pragma once

// Merges validated per-robot sub-plans into one synchronized schedule and
// emits the executable action trace.

#include "mrplan/decompose.hpp"

namespace mrplan {

// One validated sub-plan: a (subtask, robot) pair with its ground task.
struct PlanUnit {
  std::string subtask;
  int subtask_ordinal = 0;
  std::string robot;
  Plan plan;
  const GroundTask* task = nullptr;
};

struct StepRef {
  int unit = -1;
  int step = -1;
  bool operator==(const StepRef&) const = default;
};

struct DependencyGraph {
  std::vector<StepRef> nodes;                 // every step of every sub-plan, exactly once
  std::vector<std::pair<int, int>> edges;     // node index pairs (u -> v)
  std::vector<std::vector<int>> successors;   // adjacency
  std::vector<int> node_of_step;              // unit offset table flattened

  int node_index(int unit, int step) const;
  bool has_edge(int u_node, int v_node) const;
};

struct CyclicDependency : std::runtime_error {
  CyclicDependency(std::string msg, std::vector<StepRef> cycle_path)
      : std::runtime_error(std::move(msg)), cycle(std::move(cycle_path)) {}
  std::vector<StepRef> cycle;
};

// Edges: (a) consecutive steps within each sub-plan, (b) allocation dependency
// edges mapped to boundary steps, (c) conflict edges between steps of
// different robots sharing a non-robot argument, ordered by (subtask ordinal,
// step index, robot id).
DependencyGraph build_dependency_graph(const Allocation& alloc, const std::vector<PlanUnit>& units);

struct Schedule {
  struct Row {
    std::string robot;
    int start = 0;
    std::string schema;
    std::vector<std::string> args;

    std::string display() const;
  };
  std::vector<Row> rows;
  int makespan = 0;
};

// Greedy list scheduling over the DAG: at each timestep every robot runs its
// earliest unstarted step whose predecessors have completed.
Schedule schedule(const DependencyGraph& g, const std::vector<PlanUnit>& units);

struct TraceRecord {
  int timestep = 0;
  std::string robot;
  std::string schema;
  std::vector<std::string> args;
  bool operator==(const TraceRecord&) const = default;
};

struct ExecutionTrace {
  std::vector<TraceRecord> records;  // sorted by (timestep, robot)
  bool operator==(const ExecutionTrace&) const = default;
};

ExecutionTrace to_trace(const Schedule& s);

// "t=<step> <robot> <Action>(<args,...>)" per record
std::string render_trace(const ExecutionTrace& t);
std::optional<ExecutionTrace> parse_trace(std::string_view text, std::string* error = nullptr);

Schedule schedule_from_trace(const ExecutionTrace& t);

// Longest path through the DAG counted in steps (oracle-facing helper).
int critical_path_length(const DependencyGraph& g);

}  // namespace mrplan
