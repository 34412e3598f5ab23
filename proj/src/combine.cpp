#include "mrplan/combine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mrplan/util.hpp"

namespace mrplan {

int DependencyGraph::node_index(int unit, int step) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].unit == unit && nodes[i].step == step) return static_cast<int>(i);
  return -1;
}

bool DependencyGraph::has_edge(int u, int v) const {
  for (const auto& e : edges)
    if (e.first == u && e.second == v) return true;
  return false;
}

namespace {

struct StepView {
  int unit;
  int step;
  const GroundAction* action;
};

const GroundAction& unit_action(const PlanUnit& u, int step) {
  return u.task->actions[static_cast<size_t>(u.plan.actions[static_cast<size_t>(step)])];
}

// deterministic conflict order: earlier subtask first, then step, then robot
bool step_precedes(const std::vector<PlanUnit>& units, const StepRef& a, const StepRef& b) {
  const PlanUnit& ua = units[static_cast<size_t>(a.unit)];
  const PlanUnit& ub = units[static_cast<size_t>(b.unit)];
  if (ua.subtask_ordinal != ub.subtask_ordinal) return ua.subtask_ordinal < ub.subtask_ordinal;
  if (a.step != b.step) return a.step < b.step;
  return to_lower(ua.robot) < to_lower(ub.robot);
}

}  // namespace

DependencyGraph build_dependency_graph(const Allocation& alloc, const std::vector<PlanUnit>& units) {
  DependencyGraph g;
  std::vector<int> offset(units.size() + 1, 0);
  for (size_t i = 0; i < units.size(); ++i) {
    offset[i + 1] = offset[i] + static_cast<int>(units[i].plan.actions.size());
    for (size_t s = 0; s < units[i].plan.actions.size(); ++s)
      g.nodes.push_back({static_cast<int>(i), static_cast<int>(s)});
  }
  auto node_of = [&](int unit, int step) { return offset[static_cast<size_t>(unit)] + step; };

  std::set<std::pair<int, int>> edge_set;
  auto add_edge = [&](int u, int v) {
    if (u == v) return;
    if (edge_set.emplace(u, v).second) g.edges.emplace_back(u, v);
  };

  // (a) intra-plan ordering
  for (size_t i = 0; i < units.size(); ++i)
    for (size_t s = 0; s + 1 < units[i].plan.actions.size(); ++s)
      add_edge(node_of(static_cast<int>(i), static_cast<int>(s)),
               node_of(static_cast<int>(i), static_cast<int>(s) + 1));

  // (b) allocation edges mapped to boundary steps
  auto matching_units = [&](const AllocRef& ref) {
    std::vector<int> out;
    for (size_t i = 0; i < units.size(); ++i) {
      if (!iequals(units[i].subtask, ref.subtask)) continue;
      if (!ref.robot.empty() && !iequals(units[i].robot, ref.robot)) continue;
      out.push_back(static_cast<int>(i));
    }
    return out;
  };
  auto last_matching_step = [&](int unit, const std::string& skill) {
    const PlanUnit& u = units[static_cast<size_t>(unit)];
    if (u.plan.actions.empty()) return -1;
    if (!skill.empty()) {
      for (int s = static_cast<int>(u.plan.actions.size()) - 1; s >= 0; --s)
        if (iequals(unit_action(u, s).schema, skill)) return s;
    }
    return static_cast<int>(u.plan.actions.size()) - 1;
  };
  auto first_matching_step = [&](int unit, const std::string& skill) {
    const PlanUnit& u = units[static_cast<size_t>(unit)];
    if (u.plan.actions.empty()) return -1;
    if (!skill.empty()) {
      for (int s = 0; s < static_cast<int>(u.plan.actions.size()); ++s)
        if (iequals(unit_action(u, s).schema, skill)) return s;
    }
    return 0;
  };
  for (const auto& e : alloc.edges) {
    for (int fu : matching_units(e.from)) {
      int fs = last_matching_step(fu, e.from.skill);
      if (fs < 0) continue;
      for (int tu : matching_units(e.to)) {
        if (fu == tu) continue;
        int ts = first_matching_step(tu, e.to.skill);
        if (ts < 0) continue;
        add_edge(node_of(fu, fs), node_of(tu, ts));
      }
    }
  }

  // (c) conflict edges: steps of different robots sharing a non-robot argument
  std::set<std::string> robot_ids;
  for (const auto& u : units) robot_ids.insert(to_lower(u.robot));
  auto resources = [&](const GroundAction& a) {
    std::vector<std::string> out;
    for (const auto& arg : a.args)
      if (!robot_ids.count(to_lower(arg))) out.push_back(to_lower(arg));
    return out;
  };
  for (size_t i = 0; i < units.size(); ++i) {
    for (size_t j = i + 1; j < units.size(); ++j) {
      if (iequals(units[i].robot, units[j].robot)) continue;
      for (size_t si = 0; si < units[i].plan.actions.size(); ++si) {
        auto ri = resources(unit_action(units[i], static_cast<int>(si)));
        for (size_t sj = 0; sj < units[j].plan.actions.size(); ++sj) {
          auto rj = resources(unit_action(units[j], static_cast<int>(sj)));
          bool conflict = false;
          for (const auto& x : ri)
            if (std::find(rj.begin(), rj.end(), x) != rj.end()) {
              conflict = true;
              break;
            }
          if (!conflict) continue;
          StepRef a{static_cast<int>(i), static_cast<int>(si)};
          StepRef b{static_cast<int>(j), static_cast<int>(sj)};
          if (step_precedes(units, a, b))
            add_edge(node_of(a.unit, a.step), node_of(b.unit, b.step));
          else
            add_edge(node_of(b.unit, b.step), node_of(a.unit, a.step));
        }
      }
    }
  }

  g.successors.assign(g.nodes.size(), {});
  std::vector<int> indeg(g.nodes.size(), 0);
  for (const auto& e : g.edges) {
    g.successors[static_cast<size_t>(e.first)].push_back(e.second);
    ++indeg[static_cast<size_t>(e.second)];
  }

  // cycle detection (Kahn); report one concrete cycle on failure
  {
    std::vector<int> q;
    std::vector<int> deg = indeg;
    for (size_t i = 0; i < deg.size(); ++i)
      if (deg[i] == 0) q.push_back(static_cast<int>(i));
    size_t seen = 0;
    while (!q.empty()) {
      int u = q.back();
      q.pop_back();
      ++seen;
      for (int v : g.successors[static_cast<size_t>(u)])
        if (--deg[static_cast<size_t>(v)] == 0) q.push_back(v);
    }
    if (seen != g.nodes.size()) {
      // walk successors among remaining nodes until one repeats
      std::vector<StepRef> cycle;
      int start = -1;
      for (size_t i = 0; i < deg.size(); ++i)
        if (deg[i] > 0) {
          start = static_cast<int>(i);
          break;
        }
      std::set<int> seen_nodes;
      int cur = start;
      while (cur >= 0 && !seen_nodes.count(cur)) {
        seen_nodes.insert(cur);
        cycle.push_back(g.nodes[static_cast<size_t>(cur)]);
        int next = -1;
        for (int v : g.successors[static_cast<size_t>(cur)])
          if (deg[static_cast<size_t>(v)] > 0) {
            next = v;
            break;
          }
        cur = next;
      }
      throw CyclicDependency("dependency graph contains a cycle", std::move(cycle));
    }
  }
  return g;
}

std::string Schedule::Row::display() const {
  std::string s = schema + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += args[i];
  }
  s += ")";
  return s;
}

Schedule schedule(const DependencyGraph& g, const std::vector<PlanUnit>& units) {
  Schedule sched;
  size_t total = g.nodes.size();
  if (total == 0) return sched;

  std::vector<int> offset(units.size() + 1, 0);
  for (size_t i = 0; i < units.size(); ++i)
    offset[i + 1] = offset[i] + static_cast<int>(units[i].plan.actions.size());
  auto node_of = [&](int unit, int step) { return offset[static_cast<size_t>(unit)] + step; };

  std::vector<std::vector<int>> predecessors(total);
  for (const auto& e : g.edges) predecessors[static_cast<size_t>(e.second)].push_back(e.first);

  // robots in id order; per robot, units ordered by (subtask ordinal, subtask, robot)
  std::vector<std::string> robots;
  for (const auto& u : units)
    if (std::find_if(robots.begin(), robots.end(),
                     [&](const std::string& r) { return iequals(r, u.robot); }) == robots.end())
      robots.push_back(u.robot);
  std::sort(robots.begin(), robots.end(),
            [](const std::string& a, const std::string& b) { return to_lower(a) < to_lower(b); });

  std::map<std::string, std::vector<int>> robot_units;
  for (size_t i = 0; i < units.size(); ++i) robot_units[to_lower(units[i].robot)].push_back(static_cast<int>(i));
  for (auto& [r, idxs] : robot_units) {
    std::sort(idxs.begin(), idxs.end(), [&](int a, int b) {
      const PlanUnit& ua = units[static_cast<size_t>(a)];
      const PlanUnit& ub = units[static_cast<size_t>(b)];
      if (ua.subtask_ordinal != ub.subtask_ordinal) return ua.subtask_ordinal < ub.subtask_ordinal;
      return to_lower(ua.subtask) < to_lower(ub.subtask);
    });
  }

  std::vector<int> start(total, -1);
  std::vector<int> next_step;  // per unit
  for (size_t i = 0; i < units.size(); ++i) next_step.push_back(0);

  size_t scheduled = 0;
  int t = 0;
  const int guard = static_cast<int>(total) * 2 + 8;
  while (scheduled < total) {
    for (const auto& robot : robots) {
      // earliest ready unstarted step of this robot
      for (int ui : robot_units[to_lower(robot)]) {
        int s = next_step[static_cast<size_t>(ui)];
        if (s >= static_cast<int>(units[static_cast<size_t>(ui)].plan.actions.size())) continue;
        int node = node_of(ui, s);
        bool ready = true;
        for (int p : predecessors[static_cast<size_t>(node)]) {
          if (start[static_cast<size_t>(p)] < 0 || start[static_cast<size_t>(p)] + 1 > t) {
            ready = false;
            break;
          }
        }
        if (!ready) continue;
        start[static_cast<size_t>(node)] = t;
        ++next_step[static_cast<size_t>(ui)];
        ++scheduled;
        const GroundAction& a = unit_action(units[static_cast<size_t>(ui)], s);
        sched.rows.push_back({robot, t, a.schema, a.args});
        break;  // one action per robot per timestep
      }
    }
    ++t;
    if (t > guard)
      throw std::runtime_error("scheduler stalled; dependency graph is not consistent with unit order");
  }

  std::sort(sched.rows.begin(), sched.rows.end(), [](const Schedule::Row& a, const Schedule::Row& b) {
    if (a.start != b.start) return a.start < b.start;
    return to_lower(a.robot) < to_lower(b.robot);
  });
  for (const auto& r : sched.rows) sched.makespan = std::max(sched.makespan, r.start + 1);
  return sched;
}

ExecutionTrace to_trace(const Schedule& s) {
  ExecutionTrace t;
  for (const auto& r : s.rows) t.records.push_back({r.start, r.robot, r.schema, r.args});
  std::sort(t.records.begin(), t.records.end(), [](const TraceRecord& a, const TraceRecord& b) {
    if (a.timestep != b.timestep) return a.timestep < b.timestep;
    return to_lower(a.robot) < to_lower(b.robot);
  });
  return t;
}

std::string render_trace(const ExecutionTrace& t) {
  std::ostringstream os;
  for (const auto& r : t.records) {
    os << "t=" << r.timestep << " " << r.robot << " " << r.schema << "(";
    for (size_t i = 0; i < r.args.size(); ++i) {
      if (i) os << ", ";
      os << r.args[i];
    }
    os << ")\n";
  }
  return os.str();
}

std::optional<ExecutionTrace> parse_trace(std::string_view text, std::string* error) {
  ExecutionTrace t;
  for (const auto& raw : split(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("t=", 0) != 0) {
      if (error) *error = "trace line must start with t=: " + line;
      return std::nullopt;
    }
    std::istringstream is(line.substr(2));
    TraceRecord rec;
    if (!(is >> rec.timestep)) {
      if (error) *error = "bad timestep: " + line;
      return std::nullopt;
    }
    if (!(is >> rec.robot)) {
      if (error) *error = "missing robot: " + line;
      return std::nullopt;
    }
    std::string rest;
    std::getline(is, rest);
    rest = trim(rest);
    size_t paren = rest.find('(');
    if (paren == std::string::npos || rest.back() != ')') {
      if (error) *error = "malformed action call: " + line;
      return std::nullopt;
    }
    rec.schema = trim(rest.substr(0, paren));
    std::string inner = rest.substr(paren + 1, rest.size() - paren - 2);
    for (const auto& a : split(inner, ',')) {
      std::string arg = trim(a);
      if (!arg.empty()) rec.args.push_back(arg);
    }
    if (rec.schema.empty()) {
      if (error) *error = "empty action name: " + line;
      return std::nullopt;
    }
    t.records.push_back(std::move(rec));
  }
  return t;
}

Schedule schedule_from_trace(const ExecutionTrace& t) {
  Schedule s;
  for (const auto& r : t.records) {
    s.rows.push_back({r.robot, r.timestep, r.schema, r.args});
    s.makespan = std::max(s.makespan, r.timestep + 1);
  }
  return s;
}

int critical_path_length(const DependencyGraph& g) {
  size_t n = g.nodes.size();
  std::vector<int> indeg(n, 0);
  for (const auto& e : g.edges) ++indeg[static_cast<size_t>(e.second)];
  std::vector<int> order;
  for (size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) order.push_back(static_cast<int>(i));
  std::vector<int> depth(n, 1);
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int u = order[qi];
    for (int v : g.successors[static_cast<size_t>(u)]) {
      depth[static_cast<size_t>(v)] = std::max(depth[static_cast<size_t>(v)], depth[static_cast<size_t>(u)] + 1);
      if (--indeg[static_cast<size_t>(v)] == 0) order.push_back(v);
    }
  }
  int longest = 0;
  for (size_t i = 0; i < n; ++i) longest = std::max(longest, depth[i]);
  return longest;
}

}  // namespace mrplan
