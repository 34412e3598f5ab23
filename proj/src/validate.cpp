#include "mrplan/validate.hpp"

#include <sstream>

namespace mrplan {

std::variant<State, UnmetLiteral> apply(const State& s, const GroundAction& a) {
  for (int32_t id : a.pre_pos)
    if (!s.contains(id)) return UnmetLiteral{id, true};
  for (int32_t id : a.pre_neg)
    if (s.contains(id)) return UnmetLiteral{id, false};
  State next = s;
  // deletes before adds; grounding guarantees add and del are disjoint
  for (int32_t id : a.del) next.erase(id);
  for (int32_t id : a.add) next.insert(id);
  return next;
}

bool goal_satisfied(const GroundTask& task, const State& s) {
  for (int32_t id : task.goal_pos)
    if (!s.contains(id)) return false;
  for (int32_t id : task.goal_neg)
    if (s.contains(id)) return false;
  return true;
}

namespace {

ValidationReport fold(const GroundTask& task, const std::vector<int32_t>& actions,
                      const std::vector<int>* unknown_step) {
  ValidationReport rep;
  rep.final_state = task.init;
  if (unknown_step && !unknown_step->empty()) {
    rep.verdict = ValidationReport::Verdict::Invalid;
    rep.reason = ValidationReport::Reason::UnknownAction;
    rep.failing_step = unknown_step->front();
    rep.executed_prefix = static_cast<size_t>(unknown_step->front());
    // execute the known prefix so the report still carries a state
  }
  size_t limit = rep.reason == ValidationReport::Reason::UnknownAction
                     ? static_cast<size_t>(rep.failing_step)
                     : actions.size();
  for (size_t i = 0; i < limit; ++i) {
    auto res = apply(rep.final_state, task.actions[static_cast<size_t>(actions[i])]);
    if (std::holds_alternative<UnmetLiteral>(res)) {
      rep.verdict = ValidationReport::Verdict::Invalid;
      rep.reason = ValidationReport::Reason::UnmetPrecondition;
      rep.failing_step = static_cast<int>(i);
      rep.unmet = std::get<UnmetLiteral>(res);
      rep.executed_prefix = i;
      return rep;
    }
    rep.final_state = std::get<State>(std::move(res));
  }
  if (rep.reason == ValidationReport::Reason::UnknownAction) return rep;

  rep.executed_prefix = actions.size();
  for (int32_t id : task.goal_pos)
    if (!rep.final_state.contains(id))
      rep.missing_goal.push_back(task.atom_name(id));
  for (int32_t id : task.goal_neg)
    if (rep.final_state.contains(id))
      rep.missing_goal.push_back("(not " + task.atom_name(id) + ")");
  if (!rep.missing_goal.empty()) {
    rep.verdict = ValidationReport::Verdict::Invalid;
    rep.reason = ValidationReport::Reason::GoalUnsatisfied;
    return rep;
  }
  rep.verdict = ValidationReport::Verdict::Valid;
  rep.reason = ValidationReport::Reason::None;
  return rep;
}

}  // namespace

ValidationReport validate_plan(const GroundTask& task, const Plan& p) {
  for (int32_t id : p.actions) {
    if (id < 0 || static_cast<size_t>(id) >= task.actions.size()) {
      ValidationReport rep;
      rep.verdict = ValidationReport::Verdict::Invalid;
      rep.reason = ValidationReport::Reason::UnknownAction;
      rep.failing_step = 0;
      rep.final_state = task.init;
      return rep;
    }
  }
  return fold(task, p.actions, nullptr);
}

ValidationReport validate_steps(const GroundTask& task, const std::vector<NamedStep>& steps) {
  std::vector<int32_t> ids;
  std::vector<int> unknown;
  for (size_t i = 0; i < steps.size(); ++i) {
    int32_t id = task.find_action(steps[i].schema, steps[i].args);
    if (id < 0) {
      unknown.push_back(static_cast<int>(i));
      break;
    }
    ids.push_back(id);
  }
  return fold(task, ids, &unknown);
}

std::string ValidationReport::to_text(const GroundTask& task) const {
  std::ostringstream os;
  if (valid()) {
    os << "plan valid: " << executed_prefix << " step(s) executed, goal satisfied\n";
    return os.str();
  }
  os << "plan invalid";
  switch (reason) {
    case Reason::UnmetPrecondition:
      os << " at step " << failing_step << ": unmet precondition ";
      if (unmet) {
        if (!unmet->must_be_true) os << "(not ";
        os << task.atom_name(unmet->atom);
        if (!unmet->must_be_true) os << ")";
      }
      break;
    case Reason::GoalUnsatisfied:
      os << ": goal unsatisfied, missing";
      for (const auto& m : missing_goal) os << " " << m;
      break;
    case Reason::UnknownAction:
      os << " at step " << failing_step << ": unknown action";
      break;
    default:
      break;
  }
  os << "\n";
  return os.str();
}

std::string ValidationReport::to_machine(const GroundTask& task) const {
  std::ostringstream os;
  os << "verdict=" << (valid() ? "valid" : "invalid") << "\n";
  os << "executed_prefix=" << executed_prefix << "\n";
  if (!valid()) {
    switch (reason) {
      case Reason::UnmetPrecondition:
        os << "reason=unmet_precondition\nstep=" << failing_step << "\n";
        if (unmet)
          os << "literal=" << (unmet->must_be_true ? "" : "not ") << task.atom_name(unmet->atom) << "\n";
        break;
      case Reason::GoalUnsatisfied:
        os << "reason=goal_unsatisfied\n";
        for (const auto& m : missing_goal) os << "missing=" << m << "\n";
        break;
      case Reason::UnknownAction:
        os << "reason=unknown_action\nstep=" << failing_step << "\n";
        break;
      default:
        break;
    }
  }
  os << "final_state=";
  for (size_t i = 0; i < final_state.atoms.size(); ++i) {
    if (i) os << " ";
    os << task.atom_name(final_state.atoms[i]);
  }
  os << "\n";
  return os.str();
}

}  // namespace mrplan
