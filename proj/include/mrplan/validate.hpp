#pragma once

// Symbolic plan execution against the ground semantics: precondition check at
// every step, goal check at the end.

#include <optional>
#include <string>
#include <variant>

#include "mrplan/search.hpp"

namespace mrplan {

struct UnmetLiteral {
  int32_t atom = -1;
  bool must_be_true = true;
};

// Next state when the preconditions hold, otherwise the first unsatisfied
// literal (smallest atom id, positive preconditions first).
std::variant<State, UnmetLiteral> apply(const State& s, const GroundAction& a);

bool goal_satisfied(const GroundTask& task, const State& s);

struct ValidationReport {
  enum class Verdict { Valid, Invalid };
  enum class Reason { None, UnmetPrecondition, GoalUnsatisfied, UnknownAction };

  Verdict verdict = Verdict::Invalid;
  Reason reason = Reason::None;
  int failing_step = -1;
  std::optional<UnmetLiteral> unmet;
  std::vector<std::string> missing_goal;  // rendered literals
  size_t executed_prefix = 0;
  State final_state;

  bool valid() const { return verdict == Verdict::Valid; }
  std::string to_text(const GroundTask& task) const;
  std::string to_machine(const GroundTask& task) const;  // line-oriented
};

ValidationReport validate_plan(const GroundTask& task, const Plan& p);

// Same fold over named steps; unknown actions yield Reason::UnknownAction.
ValidationReport validate_steps(const GroundTask& task, const std::vector<NamedStep>& steps);

}  // namespace mrplan
