#include "mrplan/heuristics.hpp"

#include <algorithm>

namespace mrplan {

double h_max(const GroundTask& task, const State& state, ExecMode exec) {
  RelaxationTable t = relaxed_costs(task, state, RelaxAggregate::Max, exec);
  double h = 0.0;
  for (int32_t id : task.goal_pos) {
    double v = t.value[static_cast<size_t>(id)];
    if (v == kInfiniteCost) return kInfiniteCost;
    h = std::max(h, v);
  }
  return h;
}

double h_add(const GroundTask& task, const State& state, ExecMode exec) {
  RelaxationTable t = relaxed_costs(task, state, RelaxAggregate::Add, exec);
  double h = 0.0;
  for (int32_t id : task.goal_pos) {
    double v = t.value[static_cast<size_t>(id)];
    if (v == kInfiniteCost) return kInfiniteCost;
    h += v;
  }
  return h;
}

RelaxedPlan extract_relaxed_plan(const GroundTask& task, const State& state, ExecMode exec) {
  RelaxationTable t = relaxed_costs(task, state, RelaxAggregate::Add, exec);
  RelaxedPlan rp;

  for (int32_t id : task.goal_pos) {
    if (t.value[static_cast<size_t>(id)] == kInfiniteCost) {
      rp.reachable = false;
      rp.cost = kInfiniteCost;
      return rp;
    }
  }

  // walk best supporters back from the goal atoms
  std::vector<uint8_t> atom_marked(task.atoms.size(), 0);
  std::vector<uint8_t> action_taken(task.actions.size(), 0);
  std::vector<int32_t> queue(task.goal_pos.begin(), task.goal_pos.end());
  while (!queue.empty()) {
    int32_t id = queue.back();
    queue.pop_back();
    size_t s = static_cast<size_t>(id);
    if (atom_marked[s] || state.contains(id)) continue;
    atom_marked[s] = 1;
    int32_t sup = t.best_supporter[s];
    if (sup < 0) continue;  // cannot happen for finite values
    if (!action_taken[static_cast<size_t>(sup)]) {
      action_taken[static_cast<size_t>(sup)] = 1;
      rp.actions.push_back(sup);
      for (int32_t pre : task.actions[static_cast<size_t>(sup)].pre_pos) queue.push_back(pre);
    }
  }
  std::sort(rp.actions.begin(), rp.actions.end());
  for (int32_t ai : rp.actions) rp.cost += task.actions[static_cast<size_t>(ai)].cost;
  return rp;
}

double h_ff(const GroundTask& task, const State& state, ExecMode exec) {
  RelaxedPlan rp = extract_relaxed_plan(task, state, exec);
  return rp.reachable ? rp.cost : kInfiniteCost;
}

}  // namespace mrplan
