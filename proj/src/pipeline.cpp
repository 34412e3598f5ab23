#include "mrplan/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mrplan/util.hpp"

namespace mrplan {

namespace fs = std::filesystem;

std::unique_ptr<LmProvider> make_provider(const PipelineConfig& config) {
  if (config.provider == "mock") {
    if (config.fixtures.empty())
      throw PipelineError("provider", "mock provider requires a fixtures directory");
    return std::make_unique<MockProvider>(MockProvider::from_directory(config.fixtures));
  }
  if (config.provider == "replay") {
    if (config.transcripts.empty())
      throw PipelineError("provider", "replay provider requires a transcripts directory");
    return std::make_unique<ReplayProvider>(config.transcripts);
  }
  if (config.provider == "live") {
    if (config.endpoint.empty())
      throw PipelineError("provider", "live provider requires an endpoint URL");
    return std::make_unique<HttpProvider>(config.endpoint, config.credential_env);
  }
  throw PipelineError("provider", "unknown provider kind '" + config.provider + "'");
}

Domain merge_domains(const std::vector<RobotProfile>& robots) {
  Domain merged;
  merged.name = "merged";
  for (const auto& r : robots) {
    for (const auto& t : r.domain.types)
      if (!merged.has_type(t)) merged.types.push_back(t);
    for (const auto& p : r.domain.predicates) {
      const PredicateDecl* existing = merged.find_predicate(p.name);
      if (!existing) {
        merged.predicates.push_back(p);
      } else if (existing->params.size() != p.params.size()) {
        throw PipelineError("combine", "robots disagree on predicate " + p.name);
      }
    }
    for (const auto& a : r.domain.actions) {
      const ActionSchema* existing = merged.find_action(a.name);
      if (!existing) {
        merged.actions.push_back(a);
        continue;
      }
      // shared skill names must be the same operator everywhere
      Domain probe;
      probe.actions = {*existing};
      Domain probe2;
      probe2.actions = {a};
      probe.name = probe2.name = "x";
      if (!structurally_equal(probe, probe2))
        throw PipelineError("combine", "robots disagree on the definition of skill " + a.name);
    }
  }
  return merged;
}

Problem merged_problem(const Scene& scene, const std::vector<RobotProfile>& robots,
                       const std::vector<Literal>& goals) {
  Problem p;
  p.name = "combined";
  p.domain_name = "merged";
  for (const auto& o : scene.objects) p.objects.push_back({o.name, o.type, {}});
  for (const auto& r : robots) p.objects.push_back({r.id, "robot", {}});
  p.init = scene.initial_atoms();
  for (const auto& r : robots)
    if (!r.initial_location.empty()) p.init.push_back({"at", {r.id, r.initial_location}, false, {}});
  p.goal = goals;
  return p;
}

SymbolicExecution replay_trace(const GroundTask& merged, const ExecutionTrace& trace) {
  SymbolicExecution ex;
  ex.final_state = merged.init;
  ex.executed = static_cast<int>(trace.records.size());
  for (const auto& rec : trace.records) {
    int32_t id = merged.find_action(rec.schema, rec.args);
    if (id < 0) {
      ex.failed_steps.push_back("t=" + std::to_string(rec.timestep) + " " + rec.schema +
                                ": unknown action in merged task");
      continue;
    }
    auto res = apply(ex.final_state, merged.actions[static_cast<size_t>(id)]);
    if (std::holds_alternative<UnmetLiteral>(res)) {
      const auto& unmet = std::get<UnmetLiteral>(res);
      ex.failed_steps.push_back("t=" + std::to_string(rec.timestep) + " " +
                                merged.actions[static_cast<size_t>(id)].name() +
                                ": unmet precondition " +
                                (unmet.must_be_true ? "" : "(not ") +
                                merged.atom_name(unmet.atom) + (unmet.must_be_true ? "" : ")"));
      continue;
    }
    ++ex.executable;
    State next = std::get<State>(std::move(res));
    if (!(next == ex.final_state)) ++ex.transitions;
    ex.final_state = std::move(next);
  }
  return ex;
}

namespace {

bool literal_holds(const GroundTask& task, const State& s, const Literal& l) {
  GroundAtom atom{l.predicate, l.args};
  int32_t id = task.find_atom(atom.key());
  bool present = id >= 0 && s.contains(id);
  return l.negated ? !present : present;
}

}  // namespace

PipelineResult run_pipeline(const std::string& instruction, const Scene& scene,
                            const std::vector<RobotProfile>& robots, const std::string& scenario,
                            const LmProvider& provider, const PipelineConfig& config,
                            const std::vector<Literal>& goal_conditions) {
  PipelineResult result;
  DecomposeConfig dcfg{config.max_retries, scenario};

  try {
    result.decomposition = identify_preconditions(instruction, scene, robots, provider, dcfg);
  } catch (const ProviderError& e) {
    throw PipelineError("decompose", e.what());
  } catch (const DecomposeError& e) {
    throw PipelineError("decompose", e.what());
  }

  Diagnostics dd = validate_decomposition(result.decomposition, scene, robots);
  if (has_errors(dd)) throw PipelineError("decompose", "\n" + render_diagnostics(dd));

  try {
    result.allocation = allocate(result.decomposition, robots, provider, dcfg);
  } catch (const UnallocatableSubtask& e) {
    throw PipelineError("allocate", e.what());
  } catch (const DecomposeError& e) {
    throw PipelineError("allocate", e.what());
  } catch (const ProviderError& e) {
    throw PipelineError("allocate", e.what());
  }

  auto robot_by_id = [&](const std::string& id) -> const RobotProfile& {
    for (const auto& r : robots)
      if (iequals(r.id, id)) return r;
    throw PipelineError("allocate", "allocation references unknown robot " + id);
  };

  // problem generation (and grounding/planning unless dry-run), unit by unit
  for (const auto& entry : result.allocation.entries) {
    const Subtask* st = result.decomposition.find(entry.subtask);
    if (!st) throw PipelineError("generate", "allocation references unknown " + entry.subtask);
    for (const auto& share : entry.shares) {
      const RobotProfile& robot = robot_by_id(share.robot);
      UnitResult unit;
      unit.subtask = st->id;
      unit.subtask_ordinal = st->ordinal;
      unit.robot = robot.id;
      try {
        unit.problem = generate_problem(*st, scene, robot, provider, dcfg);
      } catch (const ProviderError& e) {
        throw PipelineError("generate", e.what());
      } catch (const DecomposeError& e) {
        throw PipelineError("generate", e.what());
      }
      result.units.push_back(std::move(unit));
    }
  }

  if (!config.dry_run) {
    for (auto& unit : result.units) {
      const RobotProfile& robot = robot_by_id(unit.robot);
      const Subtask* st = result.decomposition.find(unit.subtask);
      try {
        unit.task = ground(robot.domain, unit.problem, config.ground);
      } catch (const GroundError& e) {
        throw PipelineError("ground", unit.subtask + "/" + unit.robot + ": " + e.what());
      }
      try {
        unit.plan = replan_loop(unit.task, *st, robot, provider, config.search, dcfg,
                                &unit.plan_from_provider);
      } catch (const PlanningFailed& e) {
        std::string detail = e.what();
        for (const auto& a : e.attempts) detail += "\n  - " + a;
        throw PipelineError("plan", detail);
      } catch (const ProviderError& e) {
        throw PipelineError("plan", unit.subtask + "/" + unit.robot + ": " + e.what());
      }
      ValidationReport rep = validate_plan(unit.task, unit.plan);
      if (!rep.valid())
        throw PipelineError("validate", unit.subtask + "/" + unit.robot + ": " + rep.to_text(unit.task));
    }

    std::vector<PlanUnit> plan_units;
    for (const auto& unit : result.units)
      plan_units.push_back({unit.subtask, unit.subtask_ordinal, unit.robot, unit.plan, &unit.task});

    try {
      result.graph = build_dependency_graph(result.allocation, plan_units);
    } catch (const CyclicDependency& e) {
      throw PipelineError("combine", e.what());
    }
    result.sched = schedule(result.graph, plan_units);
    result.trace = to_trace(result.sched);

    // merged symbolic execution
    std::vector<Literal> goals = goal_conditions;
    if (goals.empty())
      for (const auto& st : result.decomposition.subtasks)
        goals.insert(goals.end(), st.goal.begin(), st.goal.end());

    Domain merged_domain = merge_domains(robots);
    Problem mp = merged_problem(scene, robots, goals);
    Diagnostics md = check_well_formed(merged_domain, mp);
    if (has_errors(md)) throw PipelineError("combine", "merged task is ill-formed:\n" + render_diagnostics(md));
    try {
      result.merged = ground(merged_domain, mp, config.ground);
    } catch (const GroundError& e) {
      throw PipelineError("combine", e.what());
    }
    result.execution = replay_trace(result.merged, result.trace);

    result.success = true;
    for (const auto& g : goals) {
      if (!literal_holds(result.merged, result.execution.final_state, g)) {
        result.success = false;
        result.missing_goals.push_back(render_literal(g));
      }
    }
  }

  return result;
}

void persist_run(const PipelineResult& result, const TranscriptLog& transcripts,
                 const fs::path& run_dir) {
  fs::create_directories(run_dir);
  fs::create_directories(run_dir / "problems");
  fs::create_directories(run_dir / "plans");

  auto write = [](const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
  };

  write(run_dir / "decomposition.txt", result.decomposition.render());
  write(run_dir / "allocation.json", result.allocation.to_json());
  for (const auto& unit : result.units) {
    std::string stem = sanitize_for_filename(unit.robot) + "_" + sanitize_for_filename(unit.subtask);
    write(run_dir / "problems" / (stem + ".pddl"), render_problem(unit.problem));
    if (!unit.task.atoms.empty() || !unit.plan.actions.empty())
      write(run_dir / "plans" / (stem + ".plan"), render_plan(unit.task, unit.plan));
  }
  write(run_dir / "schedule.trace", render_trace(result.trace));

  nlohmann::json record;
  record["success"] = result.success;
  record["executed"] = result.execution.executed;
  record["executable"] = result.execution.executable;
  record["transitions"] = result.execution.transitions;
  record["makespan"] = result.sched.makespan;
  record["missing_goals"] = result.missing_goals;
  std::vector<std::string> atoms;
  for (int32_t id : result.execution.final_state.atoms) atoms.push_back(result.merged.atom_name(id));
  record["final_state"] = atoms;
  record["failed_steps"] = result.execution.failed_steps;
  write(run_dir / "metrics.record", record.dump(2) + "\n");

  transcripts.write_to(run_dir / "transcripts");

  // wall-clock metadata lives in its own file so runs stay byte-comparable
  std::ostringstream meta;
  meta << "written_at=" << std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count()
       << "\n";
  write(run_dir / "run.meta", meta.str());
}

}  // namespace mrplan
