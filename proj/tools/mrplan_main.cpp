// mrplan: multi-robot task planning toolkit CLI.
// Subcommands: parse, ground, plan, validate, decompose, combine, pipeline, bench.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mrplan/bench.hpp"
#include "mrplan/util.hpp"

using namespace mrplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanning = 1;  // planning/validation failure
constexpr int kExitInput = 2;     // input/fixture error

std::string slurp_or_exit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitInput);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Domain load_domain_or_exit(const std::string& path) {
  auto res = parse_domain(slurp_or_exit(path));
  std::cerr << render_diagnostics(res.diagnostics);
  if (!res.ok()) std::exit(kExitInput);
  return *res.value;
}

Problem load_problem_or_exit(const std::string& path, const Domain& domain) {
  auto res = parse_problem(slurp_or_exit(path), domain);
  std::cerr << render_diagnostics(res.diagnostics);
  if (!res.ok()) std::exit(kExitInput);
  return *res.value;
}

SearchConfig make_search_config(const std::string& mode, const std::string& heuristic, size_t limit) {
  SearchConfig cfg;
  cfg.mode = mode == "optimal" ? SearchMode::Optimal : SearchMode::Satisficing;
  if (heuristic == "hmax")
    cfg.heuristic = HeuristicKind::HMax;
  else if (heuristic == "hadd")
    cfg.heuristic = HeuristicKind::HAdd;
  else
    cfg.heuristic = HeuristicKind::HFF;
  if (cfg.mode == SearchMode::Optimal) cfg.heuristic = HeuristicKind::HMax;
  cfg.max_expansions = limit;
  return cfg;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << content;
}

std::map<std::string, double> parse_weights(const std::string& text) {
  auto parts = split(text, ',');
  if (parts.size() != 3)
    throw CLI::ValidationError("--weights expects three comma-separated values (compound,complex,vague)");
  return {{"compound", std::stod(parts[0])},
          {"complex", std::stod(parts[1])},
          {"vague", std::stod(parts[2])}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-robot task planning toolkit"};
  app.require_subcommand(1);

  // ---- parse ----
  std::string parse_file, parse_domain_file;
  bool parse_render = false;
  auto* cmd_parse = app.add_subcommand("parse", "parse and check a PDDL domain or problem file");
  cmd_parse->add_option("file", parse_file, "PDDL file")->required();
  cmd_parse->add_option("--domain", parse_domain_file, "domain file (required for problems)");
  cmd_parse->add_flag("--render", parse_render, "print the canonical rendering");

  // ---- ground ----
  std::string ground_domain, ground_problem;
  bool ground_dump = false, ground_prune = false;
  size_t ground_limit = 1'000'000;
  auto* cmd_ground = app.add_subcommand("ground", "instantiate a task and report statistics");
  cmd_ground->add_option("domain", ground_domain)->required();
  cmd_ground->add_option("problem", ground_problem)->required();
  cmd_ground->add_flag("--dump", ground_dump, "print the ground task listing");
  cmd_ground->add_flag("--prune", ground_prune, "drop relaxed-unreachable actions");
  cmd_ground->add_option("--limit", ground_limit, "ground-action limit");

  // ---- plan ----
  std::string plan_domain, plan_problem, plan_mode = "satisficing", plan_heuristic = "hff", plan_out;
  size_t plan_limit = 1'000'000;
  auto* cmd_plan = app.add_subcommand("plan", "search for a plan");
  cmd_plan->add_option("domain", plan_domain)->required();
  cmd_plan->add_option("problem", plan_problem)->required();
  cmd_plan->add_option("--mode", plan_mode)->check(CLI::IsMember({"satisficing", "optimal"}));
  cmd_plan->add_option("--heuristic", plan_heuristic)->check(CLI::IsMember({"hff", "hadd", "hmax"}));
  cmd_plan->add_option("--limit", plan_limit, "node expansion limit");
  cmd_plan->add_option("--out", plan_out, "write the plan to a file");

  // ---- validate ----
  std::string val_domain, val_problem, val_plan;
  bool val_machine = false;
  auto* cmd_validate = app.add_subcommand("validate", "execute a plan symbolically");
  cmd_validate->add_option("domain", val_domain)->required();
  cmd_validate->add_option("problem", val_problem)->required();
  cmd_validate->add_option("plan", val_plan)->required();
  cmd_validate->add_flag("--machine", val_machine, "machine-readable report");

  // ---- decompose ----
  std::string dec_instruction, dec_scene, dec_fixtures, dec_scenario, dec_out;
  std::vector<std::string> dec_robots;
  auto* cmd_decompose = app.add_subcommand("decompose", "run the precondition identifier and allocator");
  cmd_decompose->add_option("--instruction,-i", dec_instruction)->required();
  cmd_decompose->add_option("--scene", dec_scene)->required();
  cmd_decompose->add_option("--robots", dec_robots, "robot profile files")->required();
  cmd_decompose->add_option("--fixtures", dec_fixtures, "fixture directory (mock provider)")->required();
  cmd_decompose->add_option("--scenario", dec_scenario, "fixture scenario id")->required();
  cmd_decompose->add_option("--out", dec_out, "output directory");

  // ---- combine ----
  std::string comb_alloc, comb_out;
  std::vector<std::string> comb_plans;
  std::vector<std::string> comb_tasks;  // domain/problem pairs per plan unit
  auto* cmd_combine = app.add_subcommand("combine", "merge sub-plans into a schedule and trace");
  cmd_combine->add_option("alloc", comb_alloc, "allocation.json")->required();
  cmd_combine->add_option("plans", comb_plans, "<robot>_<subtask>.plan files")->required();
  cmd_combine->add_option("--task", comb_tasks,
                          "per-plan 'domain.pddl,problem.pddl' (same order as plans)")
      ->required();
  cmd_combine->add_option("--out", comb_out, "trace output file");

  // ---- pipeline ----
  std::string pipe_instruction, pipe_scene, pipe_scenario, pipe_run_dir;
  std::vector<std::string> pipe_robots;
  std::string pipe_provider = "mock", pipe_fixtures, pipe_transcripts, pipe_endpoint;
  std::string pipe_mode = "satisficing", pipe_heuristic = "hff";
  size_t pipe_limit = 1'000'000;
  int pipe_retries = 3;
  bool pipe_dry = false;
  auto* cmd_pipeline = app.add_subcommand("pipeline", "run the full instruction-to-trace pipeline");
  cmd_pipeline->add_option("--instruction,-i", pipe_instruction)->required();
  cmd_pipeline->add_option("--scene", pipe_scene)->required();
  cmd_pipeline->add_option("--robots", pipe_robots)->required();
  cmd_pipeline->add_option("--scenario", pipe_scenario)->required();
  cmd_pipeline->add_option("--provider", pipe_provider)->check(CLI::IsMember({"mock", "replay", "live"}));
  cmd_pipeline->add_option("--fixtures", pipe_fixtures);
  cmd_pipeline->add_option("--transcripts", pipe_transcripts);
  cmd_pipeline->add_option("--endpoint", pipe_endpoint);
  cmd_pipeline->add_option("--run-dir", pipe_run_dir);
  cmd_pipeline->add_option("--mode", pipe_mode)->check(CLI::IsMember({"satisficing", "optimal"}));
  cmd_pipeline->add_option("--heuristic", pipe_heuristic)->check(CLI::IsMember({"hff", "hadd", "hmax"}));
  cmd_pipeline->add_option("--limit", pipe_limit);
  cmd_pipeline->add_option("--retries", pipe_retries);
  cmd_pipeline->add_flag("--dry-run", pipe_dry, "stop after problem generation");

  // ---- bench ----
  auto* cmd_bench = app.add_subcommand("bench", "task-suite benchmarking");
  cmd_bench->require_subcommand(1);

  std::string bench_suite, bench_provider = "mock", bench_fixtures, bench_out, bench_transcripts;
  auto* cmd_bench_run = cmd_bench->add_subcommand("run", "run a suite end to end");
  cmd_bench_run->add_option("suite", bench_suite)->required();
  cmd_bench_run->add_option("--provider", bench_provider)->check(CLI::IsMember({"mock", "replay", "live"}));
  cmd_bench_run->add_option("--fixtures", bench_fixtures);
  cmd_bench_run->add_option("--transcripts", bench_transcripts);
  cmd_bench_run->add_option("--out", bench_out, "output directory");

  std::string metrics_records, metrics_suite;
  auto* cmd_bench_metrics = cmd_bench->add_subcommand("metrics", "recompute a report from records");
  cmd_bench_metrics->add_option("records", metrics_records)->required();
  cmd_bench_metrics->add_option("--suite", metrics_suite)->required();

  std::string cmp_a, cmp_b, cmp_weights = "30,20,20";
  auto* cmd_bench_compare = cmd_bench->add_subcommand("compare", "aggregate improvement of A over B");
  cmd_bench_compare->add_option("a", cmp_a, "report JSON (ours)")->required();
  cmd_bench_compare->add_option("b", cmp_b, "report JSON (baseline)")->required();
  cmd_bench_compare->add_option("--weights", cmp_weights, "category weights compound,complex,vague");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_parse) {
      std::string text = slurp_or_exit(parse_file);
      bool is_problem = to_lower(text).find("(problem") != std::string::npos;
      if (is_problem) {
        if (parse_domain_file.empty()) {
          std::cerr << "error: parsing a problem requires --domain\n";
          return kExitInput;
        }
        Domain d = load_domain_or_exit(parse_domain_file);
        auto res = parse_problem(text, d);
        std::cerr << render_diagnostics(res.diagnostics);
        if (!res.ok()) return kExitInput;
        std::cout << "problem " << res.value->name << ": " << res.value->objects.size()
                  << " objects, " << res.value->init.size() << " init atoms, "
                  << res.value->goal.size() << " goal literals\n";
        if (parse_render) std::cout << render_problem(*res.value);
      } else {
        auto res = parse_domain(text);
        std::cerr << render_diagnostics(res.diagnostics);
        if (!res.ok()) return kExitInput;
        std::cout << "domain " << res.value->name << ": " << res.value->types.size() << " types, "
                  << res.value->predicates.size() << " predicates, " << res.value->actions.size()
                  << " actions\n";
        if (parse_render) std::cout << render_domain(*res.value);
      }
      return kExitOk;
    }

    if (*cmd_ground) {
      Domain d = load_domain_or_exit(ground_domain);
      Problem p = load_problem_or_exit(ground_problem, d);
      GroundOptions opts;
      opts.max_actions = ground_limit;
      GroundTask task = ground(d, p, opts);
      if (ground_prune) task = prune_unreachable(task);
      std::cout << "atoms: " << task.atoms.size() << "\n"
                << "actions: " << task.actions.size() << " (raw " << task.actions_before_pruning
                << ", static-dropped " << task.actions_dropped_static << ")\n"
                << "init: " << task.init.atoms.size() << " atoms, goal: " << task.goal_pos.size()
                << "+" << task.goal_neg.size() << " literals\n";
      if (ground_dump) std::cout << dump_ground_task(task);
      return kExitOk;
    }

    if (*cmd_plan) {
      Domain d = load_domain_or_exit(plan_domain);
      Problem p = load_problem_or_exit(plan_problem, d);
      GroundTask task = ground(d, p);
      PlanOutcome outcome = plan(task, make_search_config(plan_mode, plan_heuristic, plan_limit));
      switch (outcome.status) {
        case PlanStatus::Found:
          write_output(plan_out, render_plan(task, outcome.plan));
          return kExitOk;
        case PlanStatus::Unsolvable:
          std::cerr << "unsolvable\n";
          return kExitPlanning;
        case PlanStatus::ResourceLimit:
          std::cerr << "resource limit reached after " << outcome.expansions << " expansions\n";
          return kExitPlanning;
      }
    }

    if (*cmd_validate) {
      Domain d = load_domain_or_exit(val_domain);
      Problem p = load_problem_or_exit(val_problem, d);
      GroundTask task = ground(d, p);
      std::string err;
      auto steps = parse_plan_text(slurp_or_exit(val_plan), &err);
      if (!steps) {
        std::cerr << "error: " << err << "\n";
        return kExitInput;
      }
      ValidationReport rep = validate_steps(task, *steps);
      std::cout << (val_machine ? rep.to_machine(task) : rep.to_text(task));
      return rep.valid() ? kExitOk : kExitPlanning;
    }

    if (*cmd_decompose) {
      Scene scene = load_scene(dec_scene);
      std::vector<RobotProfile> robots;
      for (const auto& r : dec_robots) robots.push_back(load_robot_profile(r));
      MockProvider provider = MockProvider::from_directory(dec_fixtures);
      DecomposeConfig cfg{3, dec_scenario};
      Decomposition d = identify_preconditions(dec_instruction, scene, robots, provider, cfg);
      Diagnostics diags = validate_decomposition(d, scene, robots);
      std::cerr << render_diagnostics(diags);
      if (has_errors(diags)) return kExitInput;
      Allocation alloc = allocate(d, robots, provider, cfg);
      if (dec_out.empty()) {
        std::cout << d.render() << alloc.to_json();
      } else {
        std::filesystem::create_directories(dec_out);
        std::ofstream(std::filesystem::path(dec_out) / "decomposition.txt") << d.render();
        std::ofstream(std::filesystem::path(dec_out) / "allocation.json") << alloc.to_json();
      }
      return kExitOk;
    }

    if (*cmd_combine) {
      if (comb_tasks.size() != comb_plans.size()) {
        std::cerr << "error: need one --task per plan file\n";
        return kExitInput;
      }
      Allocation alloc = Allocation::from_json(slurp_or_exit(comb_alloc));
      std::vector<GroundTask> tasks;
      tasks.reserve(comb_plans.size());
      std::vector<PlanUnit> units;
      // ordinals follow allocation entry order
      auto ordinal_of = [&](const std::string& subtask) {
        for (size_t i = 0; i < alloc.entries.size(); ++i)
          if (iequals(alloc.entries[i].subtask, subtask)) return static_cast<int>(i) + 1;
        return 0;
      };
      for (size_t i = 0; i < comb_plans.size(); ++i) {
        auto dp = split(comb_tasks[i], ',');
        if (dp.size() != 2) {
          std::cerr << "error: --task expects 'domain.pddl,problem.pddl'\n";
          return kExitInput;
        }
        Domain d = load_domain_or_exit(dp[0]);
        Problem p = load_problem_or_exit(dp[1], d);
        tasks.push_back(ground(d, p));
      }
      for (size_t i = 0; i < comb_plans.size(); ++i) {
        // "<robot>_<subtask>.plan"
        std::string stem = std::filesystem::path(comb_plans[i]).stem().string();
        size_t sep = stem.find('_');
        if (sep == std::string::npos) {
          std::cerr << "error: plan files must be named <robot>_<subtask>.plan\n";
          return kExitInput;
        }
        std::string robot = stem.substr(0, sep);
        std::string subtask = stem.substr(sep + 1);
        std::string err;
        auto steps = parse_plan_text(slurp_or_exit(comb_plans[i]), &err);
        if (!steps) {
          std::cerr << "error: " << comb_plans[i] << ": " << err << "\n";
          return kExitInput;
        }
        int bad = -1;
        auto resolved = resolve_plan(tasks[i], *steps, &bad);
        if (!resolved) {
          std::cerr << "error: " << comb_plans[i] << ": step " << bad
                    << " does not ground against its task\n";
          return kExitInput;
        }
        units.push_back({subtask, ordinal_of(subtask), robot, *resolved, &tasks[i]});
      }
      DependencyGraph g = build_dependency_graph(alloc, units);
      Schedule s = schedule(g, units);
      write_output(comb_out, render_trace(to_trace(s)));
      return kExitOk;
    }

    if (*cmd_pipeline) {
      Scene scene = load_scene(pipe_scene);
      std::vector<RobotProfile> robots;
      for (const auto& r : pipe_robots) robots.push_back(load_robot_profile(r));
      PipelineConfig config;
      config.provider = pipe_provider;
      config.fixtures = pipe_fixtures;
      config.transcripts = pipe_transcripts;
      config.endpoint = pipe_endpoint;
      config.search = make_search_config(pipe_mode, pipe_heuristic, pipe_limit);
      config.max_retries = pipe_retries;
      config.run_dir = pipe_run_dir;
      config.dry_run = pipe_dry;

      std::unique_ptr<LmProvider> provider = make_provider(config);
      TranscriptLog log;
      LoggingProvider logging(*provider, log);
      PipelineResult result =
          run_pipeline(pipe_instruction, scene, robots, pipe_scenario, logging, config);
      if (!config.run_dir.empty()) persist_run(result, log, config.run_dir);
      if (config.dry_run) {
        std::cout << "dry run: " << result.units.size() << " problems generated\n";
        return kExitOk;
      }
      std::cout << render_trace(result.trace);
      std::cout << "makespan: " << result.sched.makespan << ", success: "
                << (result.success ? "yes" : "no") << "\n";
      if (!result.success) {
        for (const auto& g : result.missing_goals) std::cerr << "missing goal: " << g << "\n";
        return kExitPlanning;
      }
      return kExitOk;
    }

    if (*cmd_bench_run) {
      Diagnostics warnings;
      std::vector<TaskSpec> suite = load_task_suite(bench_suite, &warnings);
      std::cerr << render_diagnostics(warnings);
      PipelineConfig config;
      config.provider = bench_provider;
      config.fixtures = bench_fixtures;
      config.transcripts = bench_transcripts;
      if (!bench_out.empty()) config.run_dir = std::filesystem::path(bench_out) / "runs";
      std::unique_ptr<LmProvider> provider = make_provider(config);
      std::vector<RunRecord> records = run_suite(suite, config, *provider);
      MetricsReport report = compute_metrics(records, suite);
      std::cout << render_report(report);
      if (!bench_out.empty()) {
        std::filesystem::create_directories(bench_out);
        std::ofstream(std::filesystem::path(bench_out) / "records.json") << records_to_json(records);
        std::ofstream(std::filesystem::path(bench_out) / "report.json") << report_to_json(report);
        std::ofstream(std::filesystem::path(bench_out) / "report.txt") << render_report(report);
      }
      return kExitOk;
    }

    if (*cmd_bench_metrics) {
      std::vector<RunRecord> records = records_from_json(slurp_or_exit(metrics_records));
      std::vector<TaskSpec> suite = load_task_suite(metrics_suite);
      MetricsReport report = compute_metrics(records, suite);
      std::cout << render_report(report);
      return kExitOk;
    }

    if (*cmd_bench_compare) {
      MetricsReport ours = report_from_json(slurp_or_exit(cmp_a));
      MetricsReport baseline = report_from_json(slurp_or_exit(cmp_b));
      auto gains = aggregate_improvement(ours, baseline, parse_weights(cmp_weights));
      std::cout << render_gains(gains);
      return kExitOk;
    }
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool input_side = e.stage == "provider" || e.stage == "decompose" || e.stage == "generate" ||
                      e.stage == "allocate";
    return input_side ? kExitInput : kExitPlanning;
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SuiteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DecomposeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPlanning;
  }

  return kExitOk;
}
