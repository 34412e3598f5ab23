#pragma once

// Forward state-space search over a ground task: greedy best-first for
// satisficing planning, A* with h_max for optimal planning.

#include <optional>
#include <string>
#include <vector>

#include "mrplan/heuristics.hpp"

namespace mrplan {

enum class SearchMode { Satisficing, Optimal };
enum class HeuristicKind { HFF, HAdd, HMax };

struct SearchConfig {
  SearchMode mode = SearchMode::Satisficing;
  HeuristicKind heuristic = HeuristicKind::HFF;
  size_t max_expansions = 1'000'000;
  bool unit_costs = false;  // force cost(a) = 1 regardless of schema costs
  ExecMode exec = ExecMode::Auto;

  static SearchConfig optimal() {
    SearchConfig c;
    c.mode = SearchMode::Optimal;
    c.heuristic = HeuristicKind::HMax;
    return c;
  }
};

struct Plan {
  std::vector<int32_t> actions;
  double cost = 0.0;
};

enum class PlanStatus { Found, Unsolvable, ResourceLimit };

struct PlanOutcome {
  PlanStatus status = PlanStatus::Unsolvable;
  Plan plan;
  size_t expansions = 0;
};

// Optimal mode requires the admissible h_max; throws std::invalid_argument on
// an inconsistent config.
PlanOutcome plan(const GroundTask& task, const SearchConfig& config = {});

// "<index>: (<Name> <args...>)" lines plus a "; cost = N" trailer.
std::string render_plan(const GroundTask& task, const Plan& p);

struct NamedStep {
  std::string schema;
  std::vector<std::string> args;
};

std::optional<std::vector<NamedStep>> parse_plan_text(std::string_view text, std::string* error = nullptr);

// Resolves named steps against the task's action table; on failure returns
// nullopt and sets *bad_step to the offending index.
std::optional<Plan> resolve_plan(const GroundTask& task, const std::vector<NamedStep>& steps,
                                 int* bad_step = nullptr);

struct SketchScore {
  double cost = kInfiniteCost;
  // set when a step's symbols do not ground against the task
  std::optional<int> error_step;
  std::string error_symbol;
};

// Scores a proposed action sequence under delete-relaxed execution: sum of
// costs when every step's positive preconditions hold in the accumulated
// relaxed state and the goal is relaxed-achieved afterwards, else infinity.
SketchScore sketch_cost(const GroundTask& task, const std::vector<NamedStep>& steps);

}  // namespace mrplan
