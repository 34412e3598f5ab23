#include "mrplan/decompose.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mrplan/util.hpp"

namespace mrplan {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> RobotProfile::skills() const {
  std::vector<std::string> out;
  for (const auto& a : domain.actions) out.push_back(a.name);
  return out;
}

bool RobotProfile::has_skill(std::string_view name) const {
  return domain.find_action(name) != nullptr;
}

std::vector<Literal> Scene::initial_atoms() const {
  std::vector<Literal> out;
  for (const auto& o : objects)
    if (!o.location.empty()) out.push_back({"at-location", {o.name, o.location}, false, {}});
  out.insert(out.end(), extra_init.begin(), extra_init.end());
  return out;
}

bool Scene::has_object(std::string_view name) const {
  for (const auto& o : objects)
    if (iequals(o.name, name)) return true;
  return false;
}

const Subtask* Decomposition::find(std::string_view id) const {
  for (const auto& s : subtasks)
    if (iequals(s.id, id)) return &s;
  return nullptr;
}

const Allocation::Entry* Allocation::find(std::string_view subtask) const {
  for (const auto& e : entries)
    if (iequals(e.subtask, subtask)) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Response parsing: the pinned decomposition layout
// ---------------------------------------------------------------------------

namespace {

// "Subtask 3: Prepare apple slices (skills required: GoToObject, SliceObject)"
bool parse_subtask_header(const std::string& line, Subtask* out, std::string* error) {
  if (line.rfind("Subtask ", 0) != 0) return false;
  size_t colon = line.find(':');
  if (colon == std::string::npos) {
    *error = "subtask header without ':': " + line;
    return false;
  }
  std::string num = trim(line.substr(8, colon - 8));
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      *error = "malformed subtask number: " + line;
      return false;
    }
  out->ordinal = std::stoi(num);
  out->id = "subtask" + num;
  std::string rest = trim(line.substr(colon + 1));
  size_t skills_at = to_lower(rest).find("(skills required:");
  if (skills_at == std::string::npos) {
    *error = "subtask header without '(skills required: ...)': " + line;
    return false;
  }
  out->description = trim(rest.substr(0, skills_at));
  if (!out->description.empty() && out->description.back() == '.') out->description.pop_back();
  std::string skills = rest.substr(skills_at + 17);
  size_t close = skills.rfind(')');
  if (close != std::string::npos) skills = skills.substr(0, close);
  for (const auto& s : split(skills, ',')) {
    std::string name = trim(s);
    if (!name.empty()) out->required_skills.push_back(name);
  }
  if (out->required_skills.empty()) {
    *error = "subtask header with empty skill list: " + line;
    return false;
  }
  return true;
}

// Comma-separated literals at paren depth zero: "(a X), (not (b Y))"
std::optional<std::vector<Literal>> parse_literal_list(const std::string& text, std::string* error) {
  std::vector<Literal> out;
  std::string cur;
  int depth = 0;
  auto flush = [&]() -> bool {
    std::string t = trim(cur);
    cur.clear();
    if (t.empty() || iequals(t, "none")) return true;
    std::string err;
    auto lit = parse_literal(t, &err);
    if (!lit) {
      if (error) *error = "bad literal '" + t + "': " + err;
      return false;
    }
    out.push_back(*lit);
    return true;
  };
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      if (!flush()) return std::nullopt;
    } else {
      cur += c;
    }
  }
  if (!flush()) return std::nullopt;
  return out;
}

std::vector<std::string> parse_symbol_list(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& s : split(text, ',')) {
    std::string t = trim(s);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace

std::optional<Decomposition> parse_decomposition_response(const std::string& text,
                                                          std::string* error) {
  Decomposition d;
  Subtask* cur = nullptr;
  ActionSketch* step = nullptr;
  std::string err;

  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.rfind("Subtask ", 0) == 0 && line.find(':') != std::string::npos &&
        to_lower(line).find("(skills required:") != std::string::npos) {
      Subtask st;
      if (!parse_subtask_header(line, &st, &err)) {
        if (error) *error = err;
        return std::nullopt;
      }
      d.subtasks.push_back(std::move(st));
      cur = &d.subtasks.back();
      step = nullptr;
      continue;
    }
    if (!cur) {
      // preamble such as "Independent subtasks:" is tolerated
      continue;
    }
    if (line.rfind("Goal:", 0) == 0) {
      auto lits = parse_literal_list(line.substr(5), &err);
      if (!lits) {
        if (error) *error = err;
        return std::nullopt;
      }
      cur->goal = std::move(*lits);
      continue;
    }
    if (line.rfind("After:", 0) == 0) {
      std::string rest = trim(line.substr(6));
      if (!iequals(rest, "none")) {
        for (const auto& s : split(rest, ',')) {
          std::string t = to_lower(trim(s));
          t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
          if (!t.empty()) cur->after.push_back(t);
        }
      }
      continue;
    }
    if (line.rfind("- Parameters:", 0) == 0) {
      if (!step) {
        if (error) *error = "Parameters line outside an action block";
        return std::nullopt;
      }
      step->args = parse_symbol_list(line.substr(13));
      continue;
    }
    if (line.rfind("- Preconditions:", 0) == 0) {
      if (!step) {
        if (error) *error = "Preconditions line outside an action block";
        return std::nullopt;
      }
      auto lits = parse_literal_list(line.substr(16), &err);
      if (!lits) {
        if (error) *error = err;
        return std::nullopt;
      }
      step->preconditions = std::move(*lits);
      continue;
    }
    if (line.rfind("- Effects:", 0) == 0) {
      if (!step) {
        if (error) *error = "Effects line outside an action block";
        return std::nullopt;
      }
      auto lits = parse_literal_list(line.substr(10), &err);
      if (!lits) {
        if (error) *error = err;
        return std::nullopt;
      }
      step->effects = std::move(*lits);
      continue;
    }
    // "SkillName: free text" opens an action block
    size_t colon = line.find(':');
    if (colon != std::string::npos && colon > 0 && line.find(' ') > colon) {
      ActionSketch sk;
      sk.skill = trim(line.substr(0, colon));
      sk.note = trim(line.substr(colon + 1));
      cur->steps.push_back(std::move(sk));
      step = &cur->steps.back();
      continue;
    }
    if (error) *error = "unrecognized line: " + line;
    return std::nullopt;
  }

  if (d.subtasks.empty()) {
    if (error) *error = "no subtasks found in response";
    return std::nullopt;
  }
  return d;
}

std::string Decomposition::render() const {
  std::ostringstream os;
  for (const auto& st : subtasks) {
    os << "Subtask " << st.ordinal << ": " << st.description << " (skills required: "
       << join(st.required_skills, ", ") << ")\n";
    std::vector<std::string> goal;
    for (const auto& l : st.goal) goal.push_back(render_literal(l));
    os << "Goal: " << (goal.empty() ? "none" : join(goal, ", ")) << "\n";
    if (st.after.empty()) {
      os << "After: none\n";
    } else {
      os << "After: " << join(st.after, ", ") << "\n";
    }
    for (const auto& step : st.steps) {
      os << step.skill << ": " << (step.note.empty() ? "step" : step.note) << "\n";
      os << "- Parameters: " << join(step.args, ", ") << "\n";
      std::vector<std::string> pre, eff;
      for (const auto& l : step.preconditions) pre.push_back(render_literal(l));
      for (const auto& l : step.effects) eff.push_back(render_literal(l));
      os << "- Preconditions: " << (pre.empty() ? "none" : join(pre, ", ")) << "\n";
      os << "- Effects: " << (eff.empty() ? "none" : join(eff, ", ")) << "\n";
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Prompts
// ---------------------------------------------------------------------------

namespace {

std::string describe_scene(const Scene& scene) {
  std::ostringstream os;
  os << "Scene objects:\n";
  for (const auto& o : scene.objects) {
    os << "- " << o.name;
    if (!o.location.empty()) os << " at " << o.location;
    os << "\n";
  }
  if (!scene.extra_init.empty()) {
    os << "Current conditions:";
    for (const auto& l : scene.extra_init) os << " " << render_literal(l);
    os << "\n";
  }
  return os.str();
}

std::string describe_robots(const std::vector<RobotProfile>& robots) {
  std::ostringstream os;
  os << "Robots and skills:\n";
  for (const auto& r : robots) os << "- " << r.id << ": " << join(r.skills(), ", ") << "\n";
  return os.str();
}

std::string decomposition_prompt(const std::string& instruction, const Scene& scene,
                                 const std::vector<RobotProfile>& robots) {
  std::ostringstream os;
  os << "You are a task precondition identifier planning for " << robots.size()
     << " robots. Identify the sub-tasks and the action preconditions needed to complete the "
        "instruction.\n\n";
  os << "Instruction: " << instruction << "\n\n";
  os << describe_robots(robots) << "\n" << describe_scene(scene) << "\n";
  os << "Respond with one block per sub-task:\n"
        "Subtask N: <description> (skills required: <Skill, Skill, ...>)\n"
        "Goal: <comma-separated ground literals>\n"
        "After: none | subtaskM[, subtaskK]\n"
        "then one block per action step:\n"
        "<Skill>: <short description>\n"
        "- Parameters: <symbols>\n"
        "- Preconditions: <literals drawn from the skill's declared preconditions>\n"
        "- Effects: <literals drawn from the skill's declared effects>\n";
  return os.str();
}

std::string allocation_prompt(const Decomposition& d, const std::vector<RobotProfile>& robots) {
  std::ostringstream os;
  os << "You are a task allocator for a heterogeneous robot team. Assign each sub-task to robots "
        "whose combined skills cover its required skills, splitting a sub-task across robots only "
        "when no single robot covers it.\n\n";
  os << describe_robots(robots) << "\nSub-tasks:\n";
  for (const auto& st : d.subtasks)
    os << "- " << st.id << ": " << st.description << " (requires " << join(st.required_skills, ", ")
       << ")\n";
  os << "\nRespond with:\n"
        "Task Decomposition Analysis\n"
        "Subtask N -> Robot (skills: ...) [, Robot (skills: ...)]\n"
        "Dependencies: none | Subtask N -> Subtask M\n";
  return os.str();
}

std::string problem_prompt(const Subtask& st, const Scene& scene, const RobotProfile& robot,
                           const Diagnostics& previous_failures) {
  std::ostringstream os;
  os << "You are a PDDL problem generator for robot " << robot.id << " (domain "
     << robot.domain.name << "). Write one PDDL problem for the sub-task below. Use only "
        "predicates and types from the domain; respond with raw PDDL only.\n\n";
  os << "Sub-task: " << st.description << "\n";
  std::vector<std::string> goal;
  for (const auto& l : st.goal) goal.push_back(render_literal(l));
  os << "Goal literals: " << join(goal, ", ") << "\n\n";
  os << describe_scene(scene);
  if (!previous_failures.empty()) {
    os << "\nThe previous attempt failed validation:\n" << render_diagnostics(previous_failures)
       << "Regenerate the problem and fix these issues.\n";
  }
  return os.str();
}

std::string replan_prompt(const GroundTask& task, const Subtask& st, const RobotProfile& robot,
                          const std::vector<std::string>& failures) {
  std::ostringstream os;
  os << "You are an action planner for robot " << robot.id
     << ". The heuristic planner could not solve this sub-task; propose a plan directly.\n\n";
  os << "Sub-task: " << st.description << "\n";
  os << "Initial state:";
  for (int32_t id : task.init.atoms) os << " " << task.atom_name(id);
  os << "\nGoal:";
  for (int32_t id : task.goal_pos) os << " " << task.atom_name(id);
  for (int32_t id : task.goal_neg) os << " (not " << task.atom_name(id) << ")";
  os << "\n\nRespond with one action per line in the form (Skill arg1 arg2 ...).\n";
  if (!failures.empty()) {
    os << "Previous attempts failed:\n";
    for (const auto& f : failures) os << "- " << f << "\n";
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Decomposition identify_preconditions(const std::string& instruction, const Scene& scene,
                                     const std::vector<RobotProfile>& robots, const LmProvider& lm,
                                     const DecomposeConfig& cfg) {
  std::string prompt = decomposition_prompt(instruction, scene, robots);
  std::string last_error;
  for (int turn = 0; turn < cfg.max_retries; ++turn) {
    std::string response = lm.request({"precondition_identifier", cfg.scenario, turn, prompt});
    std::string err;
    auto d = parse_decomposition_response(response, &err);
    if (d) {
      Diagnostics diags = validate_decomposition(*d, scene, robots);
      if (!has_errors(diags)) return *d;
      err = "decomposition failed validation: " + render_diagnostics(diags);
    }
    last_error = err;
    prompt = decomposition_prompt(instruction, scene, robots) +
             "\nThe previous response was rejected: " + err + "\n";
  }
  throw DecomposeError("precondition identifier produced no usable decomposition after " +
                       std::to_string(cfg.max_retries) + " attempts: " + last_error);
}

Diagnostics validate_decomposition(const Decomposition& d, const Scene& scene,
                                   const std::vector<RobotProfile>& robots) {
  Diagnostics diags;
  auto err = [&](std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, {}, std::move(msg)});
  };

  std::set<std::string> robot_ids;
  for (const auto& r : robots) robot_ids.insert(to_lower(r.id));

  auto find_schema = [&](std::string_view skill) -> const ActionSchema* {
    for (const auto& r : robots)
      if (const ActionSchema* a = r.domain.find_action(skill)) return a;
    return nullptr;
  };

  auto symbol_known = [&](const std::string& s) {
    if (!s.empty() && s[0] == '?') return true;  // variables resolve later
    return scene.has_object(s) || robot_ids.count(to_lower(s)) > 0;
  };

  for (const auto& st : d.subtasks) {
    for (const auto& skill : st.required_skills) {
      if (!find_schema(skill)) err(st.id + ": unknown skill " + skill + " (no robot provides it)");
    }
    std::set<std::string> sketch_skills;
    for (const auto& step : st.steps) sketch_skills.insert(to_lower(step.skill));
    for (const auto& skill : st.required_skills) {
      if (!sketch_skills.count(to_lower(skill)))
        err(st.id + ": required skill " + skill + " does not appear in any action step");
    }
    for (const auto& dep : st.after) {
      if (!d.find(dep)) err(st.id + ": After references unknown " + dep);
      if (iequals(dep, st.id)) err(st.id + ": After references itself");
    }
    for (const auto& l : st.goal) {
      for (const auto& a : l.args) {
        if (!symbol_known(a)) err(st.id + ": ungroundable goal literal " + render_literal(l) +
                                  " (unknown object " + a + ")");
      }
    }
    for (size_t si = 0; si < st.steps.size(); ++si) {
      const ActionSketch& step = st.steps[si];
      const ActionSchema* schema = find_schema(step.skill);
      if (!schema) {
        err(st.id + " step " + std::to_string(si) + ": unknown skill " + step.skill);
        continue;
      }
      if (step.args.size() != schema->params.size()) {
        err(st.id + " step " + std::to_string(si) + ": " + step.skill + " expects " +
            std::to_string(schema->params.size()) + " parameters, got " +
            std::to_string(step.args.size()));
        continue;
      }
      for (const auto& a : step.args) {
        if (!symbol_known(a))
          err(st.id + " step " + std::to_string(si) + ": unknown object " + a);
      }
      // P' ⊆ P and E' ⊆ E after substituting sketch args for schema params
      auto substituted = [&](const Literal& l) {
        Literal out = l;
        for (auto& arg : out.args) {
          for (size_t pi = 0; pi < schema->params.size(); ++pi) {
            if (iequals(schema->params[pi].name, arg)) {
              arg = step.args[pi];
              break;
            }
          }
        }
        return out;
      };
      auto check_subset = [&](const std::vector<Literal>& sketch_lits,
                              const std::vector<Literal>& schema_lits, const char* what) {
        for (const auto& sl : sketch_lits) {
          bool found = false;
          for (const auto& dl : schema_lits) {
            if (same_literal(sl, substituted(dl))) {
              found = true;
              break;
            }
          }
          if (!found)
            err(st.id + " step " + std::to_string(si) + ": " + what + " literal " +
                render_literal(sl) + " is not among the declared " + what + "s of " + step.skill);
        }
      };
      check_subset(step.preconditions, schema->precondition, "precondition");
      check_subset(step.effects, schema->effect, "effect");
    }
  }
  return diags;
}

std::vector<RobotShare> cover_subtask(const Subtask& st, const std::vector<RobotProfile>& robots) {
  // single robot covering everything wins (smallest id among full coverers)
  std::vector<const RobotProfile*> sorted;
  for (const auto& r : robots) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RobotProfile* a, const RobotProfile* b) { return to_lower(a->id) < to_lower(b->id); });

  for (const RobotProfile* r : sorted) {
    bool all = true;
    for (const auto& s : st.required_skills)
      if (!r->has_skill(s)) {
        all = false;
        break;
      }
    if (all) return {{r->id, st.required_skills}};
  }

  // greedy split: robot covering the most uncovered skills first
  std::vector<RobotShare> shares;
  std::vector<std::string> uncovered = st.required_skills;
  while (!uncovered.empty()) {
    const RobotProfile* best = nullptr;
    size_t best_count = 0;
    for (const RobotProfile* r : sorted) {
      size_t count = 0;
      for (const auto& s : uncovered)
        if (r->has_skill(s)) ++count;
      if (count > best_count) {
        best = r;
        best_count = count;
      }
    }
    if (!best) throw UnallocatableSubtask(st.id, uncovered.front());
    RobotShare share{best->id, {}};
    std::vector<std::string> rest;
    for (const auto& s : uncovered) {
      if (best->has_skill(s))
        share.skills.push_back(s);
      else
        rest.push_back(s);
    }
    // shared skills every share needs for its own steps (movement etc.)
    for (const auto& s : st.required_skills) {
      bool already = false;
      for (const auto& have : share.skills)
        if (iequals(have, s)) already = true;
      if (!already && best->has_skill(s)) share.skills.push_back(s);
    }
    shares.push_back(std::move(share));
    uncovered = std::move(rest);
  }
  return shares;
}

namespace {

bool coverage_ok(const Subtask& st, const std::vector<RobotShare>& shares,
                 const std::vector<RobotProfile>& robots, std::string* missing_skill) {
  for (const auto& skill : st.required_skills) {
    bool covered = false;
    for (const auto& share : shares) {
      for (const auto& r : robots) {
        if (iequals(r.id, share.robot) && r.has_skill(skill)) {
          covered = true;
          break;
        }
      }
      if (covered) break;
    }
    if (!covered) {
      if (missing_skill) *missing_skill = skill;
      return false;
    }
  }
  return true;
}

// Sketch indices whose skill only this share covers (within the subtask).
std::vector<size_t> exclusive_steps(const Subtask& st, const std::vector<RobotShare>& shares,
                                    size_t share_idx) {
  std::vector<size_t> out;
  for (size_t i = 0; i < st.steps.size(); ++i) {
    const std::string& skill = st.steps[i].skill;
    size_t holders = 0;
    bool mine = false;
    for (size_t j = 0; j < shares.size(); ++j) {
      for (const auto& s : shares[j].skills) {
        if (iequals(s, skill)) {
          ++holders;
          if (j == share_idx) mine = true;
          break;
        }
      }
    }
    if (mine && holders == 1) out.push_back(i);
  }
  return out;
}

bool args_overlap(const ActionSketch& a, const ActionSketch& b) {
  for (const auto& x : a.args) {
    if (!x.empty() && x[0] == '?') continue;
    for (const auto& y : b.args)
      if (iequals(x, y)) return true;
  }
  return false;
}

// Orders split shares by first exclusive sketch step and derives the
// skill-boundary dependency edges (e.g. opener -> placer).
void add_split_edges(const Subtask& st, std::vector<RobotShare>& shares,
                     std::vector<AllocEdge>& edges) {
  if (shares.size() < 2) return;
  struct Keyed {
    size_t first_exclusive;
    std::string robot_lower;
    size_t idx;
  };
  std::vector<Keyed> order;
  for (size_t i = 0; i < shares.size(); ++i) {
    auto excl = exclusive_steps(st, shares, i);
    order.push_back({excl.empty() ? SIZE_MAX : excl.front(), to_lower(shares[i].robot), i});
  }
  std::sort(order.begin(), order.end(), [](const Keyed& a, const Keyed& b) {
    if (a.first_exclusive != b.first_exclusive) return a.first_exclusive < b.first_exclusive;
    return a.robot_lower < b.robot_lower;
  });
  std::vector<RobotShare> reordered;
  for (const auto& k : order) reordered.push_back(shares[k.idx]);
  shares = std::move(reordered);

  for (size_t i = 0; i + 1 < shares.size(); ++i) {
    auto from_excl = exclusive_steps(st, shares, i);
    auto to_excl = exclusive_steps(st, shares, i + 1);
    if (from_excl.empty() || to_excl.empty()) continue;
    size_t from_step = from_excl.back();
    // prefer the first to-step whose sketch shares an argument with the
    // from-step (the drawer: open(Drawer, ...) -> put(Keys, Drawer))
    size_t to_step = to_excl.front();
    for (size_t cand : to_excl) {
      if (args_overlap(st.steps[from_step], st.steps[cand])) {
        to_step = cand;
        break;
      }
    }
    edges.push_back({{st.id, shares[i].robot, st.steps[from_step].skill},
                     {st.id, shares[i + 1].robot, st.steps[to_step].skill}});
  }
}

bool allocation_acyclic(const Decomposition& d, const std::vector<AllocEdge>& edges) {
  // cycle check at subtask granularity (share-level edges stay within one subtask)
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& st : d.subtasks)
    for (const auto& dep : st.after) adj[to_lower(dep)].insert(to_lower(st.id));
  for (const auto& e : edges)
    if (!iequals(e.from.subtask, e.to.subtask)) adj[to_lower(e.from.subtask)].insert(to_lower(e.to.subtask));

  std::map<std::string, int> state;  // 0 new, 1 visiting, 2 done
  std::function<bool(const std::string&)> dfs = [&](const std::string& u) {
    state[u] = 1;
    for (const auto& v : adj[u]) {
      if (state[v] == 1) return false;
      if (state[v] == 0 && !dfs(v)) return false;
    }
    state[u] = 2;
    return true;
  };
  for (const auto& st : d.subtasks) {
    std::string u = to_lower(st.id);
    if (state[u] == 0 && !dfs(u)) return false;
  }
  return true;
}

}  // namespace

std::optional<Allocation> parse_allocation_response(const std::string& text, const Decomposition& d,
                                                    std::string* error) {
  Allocation alloc;
  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    std::string line = trim(raw);
    if (line.empty() || iequals(line, "Task Decomposition Analysis")) continue;
    if (line.rfind("Dependencies:", 0) == 0) {
      std::string rest = trim(line.substr(13));
      if (iequals(rest, "none")) continue;
      for (const auto& part : split(rest, ',')) {
        auto arrow = part.find("->");
        if (arrow == std::string::npos) {
          if (error) *error = "malformed dependency: " + part;
          return std::nullopt;
        }
        auto norm = [](std::string s) {
          s = to_lower(trim(s));
          s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
          return s;
        };
        AllocEdge e;
        e.from.subtask = norm(part.substr(0, arrow));
        e.to.subtask = norm(part.substr(arrow + 2));
        alloc.edges.push_back(std::move(e));
      }
      continue;
    }
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      if (error) *error = "unrecognized allocation line: " + line;
      return std::nullopt;
    }
    std::string left = to_lower(trim(line.substr(0, arrow)));
    left.erase(std::remove(left.begin(), left.end(), ' '), left.end());
    if (!d.find(left)) {
      if (error) *error = "allocation references unknown " + left;
      return std::nullopt;
    }
    Allocation::Entry entry;
    entry.subtask = left;
    // right side: "Robot1 (skills: A, B), Robot2 (skills: C)"
    std::string right = trim(line.substr(arrow + 2));
    std::string cur;
    int depth = 0;
    std::vector<std::string> parts;
    for (char c : right) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    for (const auto& part : parts) {
      std::string p = trim(part);
      RobotShare share;
      size_t paren = p.find('(');
      if (paren == std::string::npos) {
        share.robot = trim(p);
      } else {
        share.robot = trim(p.substr(0, paren));
        std::string inner = p.substr(paren + 1);
        size_t close = inner.rfind(')');
        if (close != std::string::npos) inner = inner.substr(0, close);
        size_t colon = inner.find(':');
        if (colon != std::string::npos) inner = inner.substr(colon + 1);
        share.skills = parse_symbol_list(inner);
      }
      if (share.robot.empty()) {
        if (error) *error = "allocation share without robot: " + p;
        return std::nullopt;
      }
      entry.shares.push_back(std::move(share));
    }
    if (entry.shares.empty()) {
      if (error) *error = "allocation entry without shares: " + line;
      return std::nullopt;
    }
    alloc.entries.push_back(std::move(entry));
  }
  for (const auto& st : d.subtasks) {
    if (!alloc.find(st.id)) {
      if (error) *error = "allocation is missing " + st.id;
      return std::nullopt;
    }
  }
  return alloc;
}

Allocation allocate(const Decomposition& d, const std::vector<RobotProfile>& robots,
                    const LmProvider& lm, const DecomposeConfig& cfg) {
  // fail fast when some skill is uncoverable by any combination
  for (const auto& st : d.subtasks) {
    for (const auto& skill : st.required_skills) {
      bool anyone = false;
      for (const auto& r : robots)
        if (r.has_skill(skill)) anyone = true;
      if (!anyone) throw UnallocatableSubtask(st.id, skill);
    }
  }

  std::string prompt = allocation_prompt(d, robots);
  std::optional<Allocation> proposal;
  for (int turn = 0; turn < cfg.max_retries && !proposal; ++turn) {
    std::string response;
    try {
      response = lm.request({"task_allocator", cfg.scenario, turn, prompt});
    } catch (const ProviderError&) {
      break;  // no fixture for this stage: fall through to the deterministic allocator
    }
    std::string err;
    auto parsed = parse_allocation_response(response, d, &err);
    if (!parsed) {
      prompt = allocation_prompt(d, robots) + "\nThe previous response was rejected: " + err + "\n";
      continue;
    }
    bool ok = true;
    for (const auto& st : d.subtasks) {
      std::string missing;
      const auto* entry = parsed->find(st.id);
      if (!entry || !coverage_ok(st, entry->shares, robots, &missing)) {
        prompt = allocation_prompt(d, robots) + "\nThe previous allocation was rejected: " + st.id +
                 " is not fully covered" + (missing.empty() ? "" : " (missing " + missing + ")") + "\n";
        ok = false;
        break;
      }
      for (const auto& share : entry->shares) {
        bool known = false;
        for (const auto& r : robots)
          if (iequals(r.id, share.robot)) known = true;
        if (!known) {
          prompt = allocation_prompt(d, robots) + "\nThe previous allocation was rejected: unknown robot " +
                   share.robot + "\n";
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) proposal = std::move(parsed);
  }

  Allocation alloc;
  if (proposal) {
    alloc = std::move(*proposal);
  } else {
    // deterministic fallback: greedy split policy
    for (const auto& st : d.subtasks) {
      Allocation::Entry entry;
      entry.subtask = st.id;
      entry.shares = cover_subtask(st, robots);
      alloc.entries.push_back(std::move(entry));
    }
  }

  // normalize share skills: intersect robot skills with required skills
  for (auto& entry : alloc.entries) {
    const Subtask* st = d.find(entry.subtask);
    for (auto& share : entry.shares) {
      const RobotProfile* robot = nullptr;
      for (const auto& r : robots)
        if (iequals(r.id, share.robot)) robot = &r;
      std::vector<std::string> skills;
      for (const auto& s : st->required_skills)
        if (robot && robot->has_skill(s)) skills.push_back(s);
      share.skills = std::move(skills);
    }
  }

  // subtask-level edges from the decomposition's After hints
  for (const auto& st : d.subtasks)
    for (const auto& dep : st.after) alloc.edges.push_back({{dep, "", ""}, {st.id, "", ""}});

  // share-level skill-boundary edges for split subtasks
  for (auto& entry : alloc.entries) {
    const Subtask* st = d.find(entry.subtask);
    if (entry.shares.size() > 1) add_split_edges(*st, entry.shares, alloc.edges);
  }

  if (!allocation_acyclic(d, alloc.edges))
    throw DecomposeError("allocation dependency edges form a cycle");
  return alloc;
}

std::string Allocation::to_json() const {
  json j;
  j["assignments"] = json::array();
  for (const auto& e : entries) {
    json shares = json::array();
    for (const auto& s : e.shares) shares.push_back({{"robot", s.robot}, {"skills", s.skills}});
    j["assignments"].push_back({{"subtask", e.subtask}, {"shares", shares}});
  }
  j["edges"] = json::array();
  auto ref = [](const AllocRef& r) {
    json o = {{"subtask", r.subtask}};
    if (!r.robot.empty()) o["robot"] = r.robot;
    if (!r.skill.empty()) o["skill"] = r.skill;
    return o;
  };
  for (const auto& e : edges) j["edges"].push_back({{"from", ref(e.from)}, {"to", ref(e.to)}});
  return j.dump(2) + "\n";
}

Allocation Allocation::from_json(const std::string& text) {
  json j = json::parse(text);
  Allocation a;
  for (const auto& je : j.at("assignments")) {
    Entry e;
    e.subtask = je.at("subtask").get<std::string>();
    for (const auto& js : je.at("shares")) {
      RobotShare s;
      s.robot = js.at("robot").get<std::string>();
      for (const auto& sk : js.at("skills")) s.skills.push_back(sk.get<std::string>());
      e.shares.push_back(std::move(s));
    }
    a.entries.push_back(std::move(e));
  }
  if (j.contains("edges")) {
    for (const auto& je : j.at("edges")) {
      auto ref = [](const json& o) {
        AllocRef r;
        r.subtask = o.at("subtask").get<std::string>();
        r.robot = o.value("robot", "");
        r.skill = o.value("skill", "");
        return r;
      };
      a.edges.push_back({ref(je.at("from")), ref(je.at("to"))});
    }
  }
  return a;
}

Problem generate_problem(const Subtask& subtask, const Scene& scene, const RobotProfile& robot,
                         const LmProvider& lm, const DecomposeConfig& cfg, Diagnostics* warnings) {
  std::string role = "problem_generator/" + subtask.id + "/" + robot.id;
  Diagnostics failures;
  for (int turn = 0; turn < cfg.max_retries; ++turn) {
    std::string prompt = problem_prompt(subtask, scene, robot, failures);
    std::string response = lm.request({role, cfg.scenario, turn, prompt});
    auto parsed = parse_problem(response, robot.domain);
    if (parsed.ok()) {
      Diagnostics checked = check_well_formed(robot.domain, *parsed.value);
      if (!has_errors(checked)) {
        if (warnings) {
          for (const auto& w : parsed.diagnostics) warnings->push_back(w);
          for (const auto& w : checked) warnings->push_back(w);
          if (parsed.value->goal.empty())
            warnings->push_back({Diagnostic::Severity::Warning, {},
                                 subtask.id + "/" + robot.id + ": generated problem has an empty goal"});
        }
        return *parsed.value;
      }
      failures = checked;
    } else {
      failures = parsed.diagnostics;
    }
  }
  throw DecomposeError("problem generation for " + subtask.id + "/" + robot.id + " failed after " +
                       std::to_string(cfg.max_retries) + " attempts:\n" +
                       render_diagnostics(failures));
}

Plan replan_loop(const GroundTask& task, const Subtask& subtask, const RobotProfile& robot,
                 const LmProvider& lm, const SearchConfig& search_cfg, const DecomposeConfig& cfg,
                 bool* used_provider) {
  if (used_provider) *used_provider = false;
  PlanOutcome out = plan(task, search_cfg);
  if (out.status == PlanStatus::Found) {
    ValidationReport rep = validate_plan(task, out.plan);
    if (rep.valid()) return out.plan;
  }

  std::string role = "replanner/" + subtask.id + "/" + robot.id;
  std::vector<std::string> failures;
  failures.push_back(out.status == PlanStatus::ResourceLimit ? "search hit the expansion limit"
                                                             : "search found no plan");
  for (int turn = 0; turn < cfg.max_retries; ++turn) {
    std::string response = lm.request({role, cfg.scenario, turn,
                                       replan_prompt(task, subtask, robot, failures)});
    std::string err;
    auto steps = parse_plan_text(response, &err);
    if (!steps) {
      failures.push_back("unparseable sketch: " + err);
      continue;
    }
    int bad = -1;
    auto resolved = resolve_plan(task, *steps, &bad);
    if (!resolved) {
      failures.push_back("sketch step " + std::to_string(bad) + " does not ground against the task");
      continue;
    }
    ValidationReport rep = validate_plan(task, *resolved);
    if (rep.valid()) {
      if (used_provider) *used_provider = true;
      return *resolved;
    }
    failures.push_back("sketch failed validation: " + trim(rep.to_text(task)));
  }
  throw PlanningFailed("planning failed for " + subtask.id + "/" + robot.id + " after " +
                           std::to_string(cfg.max_retries) + " provider attempts",
                       failures);
}

// ---------------------------------------------------------------------------
// File loading
// ---------------------------------------------------------------------------

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DecomposeError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Literal parse_literal_or_throw(const std::string& text, const std::string& where) {
  std::string err;
  auto lit = parse_literal(text, &err);
  if (!lit) throw DecomposeError(where + ": bad literal '" + text + "': " + err);
  return *lit;
}

}  // namespace

Scene load_scene(const fs::path& file) {
  json j = json::parse(slurp(file));
  Scene scene;
  if (!j.contains("objects") || !j["objects"].is_array())
    throw DecomposeError(file.string() + ": scene requires an 'objects' array");
  for (const auto& jo : j["objects"]) {
    Scene::Object o;
    o.name = jo.at("name").get<std::string>();
    o.type = jo.value("type", "object");
    o.location = jo.value("location", "");
    scene.objects.push_back(std::move(o));
  }
  if (j.contains("init"))
    for (const auto& ja : j["init"])
      scene.extra_init.push_back(parse_literal_or_throw(ja.get<std::string>(), file.string()));
  for (const auto& o : scene.objects)
    if (!o.location.empty() && !scene.has_object(o.location))
      throw DecomposeError(file.string() + ": object " + o.name + " located at undeclared " + o.location);
  return scene;
}

RobotProfile load_robot_profile(const fs::path& file) {
  json j = json::parse(slurp(file));
  RobotProfile r;
  r.id = j.at("id").get<std::string>();
  r.initial_location = j.value("initial_location", "");
  fs::path domain_path = j.at("domain").get<std::string>();
  if (domain_path.is_relative()) domain_path = file.parent_path() / domain_path;
  auto parsed = parse_domain(slurp(domain_path));
  if (!parsed.ok())
    throw DecomposeError(domain_path.string() + ": robot domain does not parse:\n" +
                         render_diagnostics(parsed.diagnostics));
  r.domain = *parsed.value;
  return r;
}

}  // namespace mrplan
