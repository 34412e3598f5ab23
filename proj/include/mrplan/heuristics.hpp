#pragma once

// Delete-relaxation heuristic family: h_max (admissible), h_add, and FF-style
// relaxed-plan extraction.

#include <limits>
#include <optional>

#include "mrplan/kernels.hpp"

namespace mrplan {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

// max over goal atoms of the relaxed max-cost table; 0 when the goal holds,
// infinity iff some goal atom is unreachable under delete relaxation
double h_max(const GroundTask& task, const State& state, ExecMode exec = ExecMode::Auto);

// sum over goal atoms of the relaxed add-cost table (inadmissible)
double h_add(const GroundTask& task, const State& state, ExecMode exec = ExecMode::Auto);

struct RelaxedPlan {
  std::vector<int32_t> actions;  // unique, sorted by id
  double cost = 0.0;
  bool reachable = true;
};

// Greedy FF extraction over best supporters; cost <= h_add on every state.
RelaxedPlan extract_relaxed_plan(const GroundTask& task, const State& state,
                                 ExecMode exec = ExecMode::Auto);

// Relaxed-plan cost as a heuristic value (infinity when unreachable).
double h_ff(const GroundTask& task, const State& state, ExecMode exec = ExecMode::Auto);

}  // namespace mrplan
