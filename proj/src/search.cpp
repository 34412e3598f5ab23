#include "mrplan/search.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mrplan/util.hpp"

namespace mrplan {

namespace {

bool goal_holds(const GroundTask& task, const State& s) {
  for (int32_t id : task.goal_pos)
    if (!s.contains(id)) return false;
  for (int32_t id : task.goal_neg)
    if (s.contains(id)) return false;
  return true;
}

bool applicable(const GroundAction& a, const State& s) {
  for (int32_t id : a.pre_pos)
    if (!s.contains(id)) return false;
  for (int32_t id : a.pre_neg)
    if (s.contains(id)) return false;
  return true;
}

State successor(const State& s, const GroundAction& a) {
  State next = s;
  for (int32_t id : a.del) next.erase(id);
  for (int32_t id : a.add) next.insert(id);
  return next;
}

struct Node {
  State state;
  int32_t parent = -1;
  int32_t action = -1;
  double g = 0.0;
};

struct QueueEntry {
  double key;
  uint64_t seq;  // FIFO tie-break
  int32_t node;
  bool operator>(const QueueEntry& o) const {
    if (key != o.key) return key > o.key;
    return seq > o.seq;
  }
};

}  // namespace

PlanOutcome plan(const GroundTask& task, const SearchConfig& config) {
  if (config.mode == SearchMode::Optimal && config.heuristic != HeuristicKind::HMax)
    throw std::invalid_argument("optimal mode requires the admissible h_max heuristic");

  auto action_cost = [&](const GroundAction& a) { return config.unit_costs ? 1.0 : a.cost; };

  PlanOutcome out;

  // relaxation pruning from init: sound unsolvability without search
  Reachability reach = relaxed_reachability(task, config.exec);
  for (int32_t id : task.goal_pos) {
    if (!reach.atom_reachable[static_cast<size_t>(id)]) {
      out.status = PlanStatus::Unsolvable;
      return out;
    }
  }

  const bool optimal = config.mode == SearchMode::Optimal;
  auto evaluate = [&](const State& s) -> double {
    switch (optimal ? HeuristicKind::HMax : config.heuristic) {
      case HeuristicKind::HMax:
        return h_max(task, s, config.exec);
      case HeuristicKind::HAdd:
        return h_add(task, s, config.exec);
      case HeuristicKind::HFF:
      default: {
        // FF-style relaxed-plan cost, falling back to nothing: infinity means
        // a provable dead end
        return h_ff(task, s, config.exec);
      }
    }
  };

  std::vector<Node> nodes;
  nodes.push_back({task.init, -1, -1, 0.0});

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> open;
  std::unordered_map<State, double, StateHash> best_g;
  best_g.emplace(task.init, 0.0);

  {
    double h0 = evaluate(task.init);
    if (h0 == kInfiniteCost) {
      out.status = PlanStatus::Unsolvable;
      return out;
    }
    open.push({optimal ? h0 : h0, 0, 0});
  }

  uint64_t seq = 1;
  std::vector<uint8_t> closed_flag;  // per node
  closed_flag.push_back(0);

  while (!open.empty()) {
    QueueEntry top = open.top();
    open.pop();
    Node& node = nodes[static_cast<size_t>(top.node)];
    if (closed_flag[static_cast<size_t>(top.node)]) continue;
    // stale entry: a cheaper path to this state was already expanded
    auto bg = best_g.find(node.state);
    if (bg != best_g.end() && node.g > bg->second) continue;
    closed_flag[static_cast<size_t>(top.node)] = 1;

    if (goal_holds(task, node.state)) {
      Plan p;
      int32_t cur = top.node;
      while (cur >= 0 && nodes[static_cast<size_t>(cur)].action >= 0) {
        p.actions.push_back(nodes[static_cast<size_t>(cur)].action);
        cur = nodes[static_cast<size_t>(cur)].parent;
      }
      std::reverse(p.actions.begin(), p.actions.end());
      for (int32_t ai : p.actions) p.cost += action_cost(task.actions[static_cast<size_t>(ai)]);
      out.status = PlanStatus::Found;
      out.plan = std::move(p);
      return out;
    }

    if (out.expansions >= config.max_expansions) {
      out.status = PlanStatus::ResourceLimit;
      return out;
    }
    ++out.expansions;

    const State state = node.state;  // copy: nodes may reallocate below
    const double g = node.g;
    for (size_t ai = 0; ai < task.actions.size(); ++ai) {
      const GroundAction& a = task.actions[ai];
      if (!applicable(a, state)) continue;
      State succ = successor(state, a);
      double g2 = g + action_cost(a);
      auto it = best_g.find(succ);
      if (it != best_g.end() && it->second <= g2) continue;
      double h = evaluate(succ);
      if (h == kInfiniteCost) continue;  // provable dead end under relaxation
      best_g[succ] = g2;
      nodes.push_back({std::move(succ), top.node, static_cast<int32_t>(ai), g2});
      closed_flag.push_back(0);
      double key = optimal ? g2 + h : h;
      open.push({key, seq++, static_cast<int32_t>(nodes.size() - 1)});
    }
  }

  out.status = PlanStatus::Unsolvable;
  return out;
}

std::string render_plan(const GroundTask& task, const Plan& p) {
  std::ostringstream os;
  for (size_t i = 0; i < p.actions.size(); ++i) {
    const GroundAction& a = task.actions[static_cast<size_t>(p.actions[i])];
    os << i << ": (" << a.schema;
    for (const auto& arg : a.args) os << " " << arg;
    os << ")\n";
  }
  os << "; cost = " << p.cost << "\n";
  return os.str();
}

std::optional<std::vector<NamedStep>> parse_plan_text(std::string_view text, std::string* error) {
  std::vector<NamedStep> steps;
  for (const auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == ';') continue;
    // optional "<index>:" prefix
    size_t colon = line.find(':');
    size_t paren = line.find('(');
    if (colon != std::string::npos && (paren == std::string::npos || colon < paren))
      line = trim(line.substr(colon + 1));
    if (line.empty()) continue;
    if (line.front() != '(' || line.back() != ')') {
      if (error) *error = "malformed plan step: " + line;
      return std::nullopt;
    }
    std::string inner = line.substr(1, line.size() - 2);
    for (auto& c : inner)
      if (c == ',') c = ' ';
    std::istringstream is(inner);
    NamedStep step;
    is >> step.schema;
    std::string tok;
    while (is >> tok) step.args.push_back(tok);
    if (step.schema.empty()) {
      if (error) *error = "empty plan step";
      return std::nullopt;
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

std::optional<Plan> resolve_plan(const GroundTask& task, const std::vector<NamedStep>& steps,
                                 int* bad_step) {
  Plan p;
  for (size_t i = 0; i < steps.size(); ++i) {
    int32_t id = task.find_action(steps[i].schema, steps[i].args);
    if (id < 0) {
      if (bad_step) *bad_step = static_cast<int>(i);
      return std::nullopt;
    }
    p.actions.push_back(id);
    p.cost += task.actions[static_cast<size_t>(id)].cost;
  }
  return p;
}

SketchScore sketch_cost(const GroundTask& task, const std::vector<NamedStep>& steps) {
  SketchScore score;
  State relaxed = task.init;
  double cost = 0.0;
  for (size_t i = 0; i < steps.size(); ++i) {
    int32_t id = task.find_action(steps[i].schema, steps[i].args);
    if (id < 0) {
      score.error_step = static_cast<int>(i);
      score.error_symbol = steps[i].schema;
      for (const auto& a : steps[i].args) score.error_symbol += " " + a;
      return score;
    }
    const GroundAction& a = task.actions[static_cast<size_t>(id)];
    for (int32_t pre : a.pre_pos) {
      if (!relaxed.contains(pre)) return score;  // not relaxed-executable
    }
    for (int32_t add : a.add) relaxed.insert(add);
    cost += a.cost;
  }
  for (int32_t id : task.goal_pos)
    if (!relaxed.contains(id)) return score;
  score.cost = cost;
  return score;
}

}  // namespace mrplan
