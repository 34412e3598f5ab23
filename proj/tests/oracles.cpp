#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <memory>

namespace oracle {

using namespace mrplan;

GroundTask random_task(std::mt19937& rng, const RandomTaskParams& params) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  GroundTask task;
  int n_atoms = pick(params.min_atoms, params.max_atoms);
  for (int i = 0; i < n_atoms; ++i) {
    task.atoms.push_back({"p" + std::to_string(i), {}});
    task.atom_index.emplace(task.atoms.back().key(), i);
  }

  auto random_subset = [&](int max_size) {
    std::vector<int32_t> out;
    int size = pick(0, max_size);
    for (int k = 0; k < size; ++k) out.push_back(pick(0, n_atoms - 1));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  int n_actions = pick(params.min_actions, params.max_actions);
  for (int i = 0; i < n_actions; ++i) {
    GroundAction a;
    a.schema = "a" + std::to_string(i);
    a.cost = 1.0;
    a.pre_pos = random_subset(2);
    if (params.negative_preconditions) {
      for (int32_t id : random_subset(1))
        if (!std::binary_search(a.pre_pos.begin(), a.pre_pos.end(), id)) a.pre_neg.push_back(id);
    }
    a.add = random_subset(2);
    if (a.add.empty()) a.add.push_back(pick(0, n_atoms - 1));
    for (int32_t id : random_subset(1))
      if (!std::binary_search(a.add.begin(), a.add.end(), id)) a.del.push_back(id);
    task.actions.push_back(std::move(a));
  }
  task.actions_before_pruning = task.actions.size();
  for (size_t i = 0; i < task.actions.size(); ++i)
    task.action_index.emplace(task.actions[i].schema, static_cast<int32_t>(i));

  for (int32_t id : random_subset(3)) task.init.insert(id);
  int goal_count = pick(1, 2);
  std::set<int32_t> goal;
  for (int k = 0; k < goal_count; ++k) goal.insert(pick(0, n_atoms - 1));
  task.goal_pos.assign(goal.begin(), goal.end());
  return task;
}

namespace {

bool naive_applicable(const GroundAction& a, const std::vector<int32_t>& state) {
  for (int32_t id : a.pre_pos)
    if (!std::binary_search(state.begin(), state.end(), id)) return false;
  for (int32_t id : a.pre_neg)
    if (std::binary_search(state.begin(), state.end(), id)) return false;
  return true;
}

std::vector<int32_t> naive_apply(const GroundAction& a, std::vector<int32_t> state) {
  for (int32_t id : a.del) {
    auto it = std::find(state.begin(), state.end(), id);
    if (it != state.end()) state.erase(it);
  }
  for (int32_t id : a.add)
    if (!std::binary_search(state.begin(), state.end(), id)) {
      state.push_back(id);
      std::sort(state.begin(), state.end());
    }
  return state;
}

bool naive_goal(const GroundTask& task, const std::vector<int32_t>& state) {
  for (int32_t id : task.goal_pos)
    if (!std::binary_search(state.begin(), state.end(), id)) return false;
  for (int32_t id : task.goal_neg)
    if (std::binary_search(state.begin(), state.end(), id)) return false;
  return true;
}

struct BfsResult {
  std::optional<int> cost;
  std::vector<int32_t> plan;
};

BfsResult bfs(const GroundTask& task, const std::vector<int32_t>& start) {
  struct Entry {
    std::vector<int32_t> state;
    int32_t parent;
    int32_t action;
  };
  std::vector<Entry> entries;
  std::map<std::vector<int32_t>, int> seen;
  entries.push_back({start, -1, -1});
  seen[start] = 0;
  std::deque<std::pair<int, int>> queue;  // (entry index, depth)
  queue.emplace_back(0, 0);
  while (!queue.empty()) {
    auto [idx, depth] = queue.front();
    queue.pop_front();
    std::vector<int32_t> state = entries[static_cast<size_t>(idx)].state;
    if (naive_goal(task, state)) {
      std::vector<int32_t> plan;
      int cur = idx;
      while (cur >= 0 && entries[static_cast<size_t>(cur)].action >= 0) {
        plan.push_back(entries[static_cast<size_t>(cur)].action);
        cur = entries[static_cast<size_t>(cur)].parent;
      }
      std::reverse(plan.begin(), plan.end());
      return {depth, plan};
    }
    for (size_t ai = 0; ai < task.actions.size(); ++ai) {
      const GroundAction& a = task.actions[ai];
      if (!naive_applicable(a, state)) continue;
      auto next = naive_apply(a, state);
      if (seen.count(next)) continue;
      seen[next] = static_cast<int>(entries.size());
      entries.push_back({next, idx, static_cast<int32_t>(ai)});
      queue.emplace_back(static_cast<int>(entries.size()) - 1, depth + 1);
    }
  }
  return {std::nullopt, {}};
}

}  // namespace

std::optional<int> bfs_optimal_cost(const GroundTask& task) {
  return bfs(task, task.init.atoms).cost;
}

std::optional<std::vector<int32_t>> bfs_optimal_plan(const GroundTask& task) {
  BfsResult r = bfs(task, task.init.atoms);
  if (!r.cost) return std::nullopt;
  return r.plan;
}

std::optional<int> bfs_optimal_cost_from(const GroundTask& task, const State& from) {
  return bfs(task, from.atoms).cost;
}

SimResult simulate_naive(const GroundTask& task, const std::vector<int32_t>& actions) {
  SimResult result;
  std::set<std::string> state;
  for (int32_t id : task.init.atoms) state.insert(task.atoms[static_cast<size_t>(id)].name());

  auto atom_name = [&](int32_t id) { return task.atoms[static_cast<size_t>(id)].name(); };

  for (size_t i = 0; i < actions.size(); ++i) {
    const GroundAction& a = task.actions[static_cast<size_t>(actions[i])];
    bool ok = true;
    for (int32_t id : a.pre_pos)
      if (!state.count(atom_name(id))) ok = false;
    for (int32_t id : a.pre_neg)
      if (state.count(atom_name(id))) ok = false;
    if (!ok) {
      result.failed_step = static_cast<int>(i);
      result.final_state = state;
      return result;
    }
    for (int32_t id : a.del) state.erase(atom_name(id));
    for (int32_t id : a.add) state.insert(atom_name(id));
  }
  result.final_state = state;
  result.goal_satisfied = true;
  for (int32_t id : task.goal_pos)
    if (!state.count(atom_name(id))) result.goal_satisfied = false;
  for (int32_t id : task.goal_neg)
    if (state.count(atom_name(id))) result.goal_satisfied = false;
  result.valid = result.goal_satisfied;
  return result;
}

std::map<std::string, double> relaxed_fixpoint_naive(const GroundTask& task, const State& from,
                                                     bool additive) {
  const double inf = std::numeric_limits<double>::infinity();
  std::map<std::string, double> value;
  for (const auto& atom : task.atoms) value[atom.name()] = inf;
  for (int32_t id : from.atoms) value[task.atoms[static_cast<size_t>(id)].name()] = 0.0;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : task.actions) {
      double acc = 0.0;
      bool feasible = true;
      for (int32_t id : a.pre_pos) {
        double v = value[task.atoms[static_cast<size_t>(id)].name()];
        if (v == inf) {
          feasible = false;
          break;
        }
        acc = additive ? acc + v : std::max(acc, v);
      }
      if (!feasible) continue;
      double candidate = a.cost + acc;
      for (int32_t id : a.add) {
        std::string name = task.atoms[static_cast<size_t>(id)].name();
        if (candidate < value[name]) {
          value[name] = candidate;
          changed = true;
        }
      }
    }
  }
  return value;
}

std::set<std::string> reachable_naive(const GroundTask& task) {
  std::set<std::string> reached;
  for (int32_t id : task.init.atoms) reached.insert(task.atoms[static_cast<size_t>(id)].name());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : task.actions) {
      bool ok = true;
      for (int32_t id : a.pre_pos)
        if (!reached.count(task.atoms[static_cast<size_t>(id)].name())) ok = false;
      if (!ok) continue;
      for (int32_t id : a.add) {
        auto [_, inserted] = reached.insert(task.atoms[static_cast<size_t>(id)].name());
        changed = changed || inserted;
      }
    }
  }
  return reached;
}

RandomDag random_dag(std::mt19937& rng, int max_units, int max_len, bool one_robot_per_unit) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomDag dag;
  int n_units = pick(2, max_units);
  int n_robots = one_robot_per_unit ? n_units : std::max(2, n_units - pick(1, n_units - 1));

  for (int u = 0; u < n_units; ++u) {
    auto task = std::make_unique<GroundTask>();
    int len = pick(1, max_len);
    // one atom + one action per step; the actions only exist as labels
    for (int s = 0; s < len; ++s) {
      task->atoms.push_back({"u" + std::to_string(u) + "s" + std::to_string(s), {}});
      GroundAction a;
      a.schema = "Step" + std::to_string(s);
      a.args = {"U" + std::to_string(u)};
      a.add = {static_cast<int32_t>(s)};
      task->actions.push_back(std::move(a));
    }
    PlanUnit unit;
    unit.subtask = "subtask" + std::to_string(u + 1);
    unit.subtask_ordinal = u + 1;
    unit.robot = "Robot" + std::to_string((u % n_robots) + 1);
    for (int s = 0; s < len; ++s) unit.plan.actions.push_back(s);
    unit.plan.cost = len;
    unit.task = task.get();
    dag.units.push_back(std::move(unit));
    dag.tasks.push_back(std::move(task));

    Allocation::Entry entry;
    entry.subtask = "subtask" + std::to_string(u + 1);
    entry.shares.push_back({dag.units.back().robot, {}});
    dag.alloc.entries.push_back(std::move(entry));
  }

  // forward subtask-level dependency edges keep the graph acyclic
  for (int u = 0; u < n_units; ++u) {
    for (int v = u + 1; v < n_units; ++v) {
      if (pick(0, 3) == 0) {
        dag.alloc.edges.push_back({{"subtask" + std::to_string(u + 1), "", ""},
                                   {"subtask" + std::to_string(v + 1), "", ""}});
      }
    }
  }
  return dag;
}

int critical_path_naive(const DependencyGraph& g) {
  // longest path by memoized DFS over successors
  std::vector<int> memo(g.nodes.size(), -1);
  std::function<int(int)> depth = [&](int u) -> int {
    if (memo[static_cast<size_t>(u)] >= 0) return memo[static_cast<size_t>(u)];
    int best = 1;
    for (int v : g.successors[static_cast<size_t>(u)]) best = std::max(best, 1 + depth(v));
    memo[static_cast<size_t>(u)] = best;
    return best;
  };
  int longest = 0;
  for (size_t i = 0; i < g.nodes.size(); ++i) longest = std::max(longest, depth(static_cast<int>(i)));
  return longest;
}

}  // namespace oracle
