#include "mrplan/bench.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mrplan/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mrplan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& known_categories() {
  static const std::set<std::string> cats = {"compound", "complex", "vague"};
  return cats;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SuiteError("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::vector<TaskSpec> load_task_suite(const fs::path& file, Diagnostics* warnings) {
  json j;
  try {
    j = json::parse(slurp(file));
  } catch (const json::parse_error& e) {
    throw SuiteError(file.string() + ": " + e.what());
  }
  if (!j.contains("tasks") || !j["tasks"].is_array())
    throw SuiteError(file.string() + ": tasks: expected an array");

  std::vector<TaskSpec> suite;
  const fs::path base = file.parent_path();
  for (size_t i = 0; i < j["tasks"].size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    const json& jt = j["tasks"][i];
    auto need = [&](const char* field) -> const json& {
      if (!jt.contains(field)) throw SuiteError(where + "." + field + ": missing");
      return jt[field];
    };
    TaskSpec spec;
    spec.id = need("id").get<std::string>();
    spec.category = need("category").get<std::string>();
    if (!known_categories().count(spec.category))
      throw SuiteError(where + ".category: unknown category '" + spec.category +
                       "' (expected compound|complex|vague)");
    spec.instruction = need("instruction").get<std::string>();
    try {
      spec.scene = load_scene(base / need("scene").get<std::string>());
    } catch (const std::exception& e) {
      throw SuiteError(where + ".scene: " + e.what());
    }
    const json& jr = need("robots");
    if (!jr.is_array() || jr.empty()) throw SuiteError(where + ".robots: expected a non-empty array");
    for (size_t k = 0; k < jr.size(); ++k) {
      try {
        spec.robots.push_back(load_robot_profile(base / jr[k].get<std::string>()));
      } catch (const std::exception& e) {
        throw SuiteError(where + ".robots[" + std::to_string(k) + "]: " + e.what());
      }
    }
    const json& jg = need("goal_conditions");
    if (!jg.is_array() || jg.empty())
      throw SuiteError(where + ".goal_conditions: expected a non-empty array");
    for (size_t k = 0; k < jg.size(); ++k) {
      std::string err;
      auto lit = parse_literal(jg[k].get<std::string>(), &err);
      if (!lit)
        throw SuiteError(where + ".goal_conditions[" + std::to_string(k) + "]: " + err);
      spec.goal_conditions.push_back(*lit);
    }
    spec.gt_timesteps = need("gt_timesteps").get<int>();
    spec.gt_transitions = need("gt_transitions").get<int>();
    if (spec.gt_timesteps < 1) throw SuiteError(where + ".gt_timesteps: must be >= 1");
    if (spec.gt_transitions < 1) throw SuiteError(where + ".gt_transitions: must be >= 1");
    suite.push_back(std::move(spec));
  }
  if (suite.empty() && warnings)
    warnings->push_back({Diagnostic::Severity::Warning, {}, file.string() + ": suite is empty"});
  return suite;
}

std::vector<RunRecord> run_suite(const std::vector<TaskSpec>& suite, const PipelineConfig& config,
                                 const LmProvider& provider) {
  std::vector<RunRecord> records(suite.size());

  // tasks are independent; the mock provider is stateless per request
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(suite.size()); ++i) {
    const TaskSpec& spec = suite[static_cast<size_t>(i)];
    RunRecord rec;
    rec.task_id = spec.id;
    try {
      PipelineConfig task_config = config;
      if (!config.run_dir.empty()) task_config.run_dir = config.run_dir / spec.id;
      TranscriptLog log;
      LoggingProvider logging(provider, log);
      PipelineResult result = run_pipeline(spec.instruction, spec.scene, spec.robots, spec.id,
                                           logging, task_config, spec.goal_conditions);
      rec.success = result.success;
      rec.executed = result.execution.executed;
      rec.executable = result.execution.executable;
      rec.transitions = result.execution.transitions;
      rec.makespan = result.sched.makespan;
      rec.missing_goals = result.missing_goals;
      for (int32_t id : result.execution.final_state.atoms)
        rec.final_state.push_back(result.merged.atom_name(id));
      if (!task_config.run_dir.empty()) persist_run(result, log, task_config.run_dir);
    } catch (const std::exception& e) {
      rec.success = false;
      rec.failure = e.what();
      // an aborted run misses every goal condition
      for (const auto& g : spec.goal_conditions) rec.missing_goals.push_back(render_literal(g));
    }
    records[static_cast<size_t>(i)] = std::move(rec);
  }
  return records;
}

MetricsReport compute_metrics(const std::vector<RunRecord>& records,
                              const std::vector<TaskSpec>& suite) {
  if (records.size() != suite.size())
    throw std::invalid_argument("compute_metrics requires exactly one record per task (" +
                                std::to_string(records.size()) + " records, " +
                                std::to_string(suite.size()) + " tasks)");
  std::map<std::string, const TaskSpec*> by_id;
  for (const auto& s : suite) by_id[s.id] = &s;

  struct Accum {
    int tasks = 0;
    int successes = 0;
    double gcr_sum = 0;
    double exe_sum = 0;
    long long gt_transitions = 0, achieved_transitions = 0;
    long long gt_timesteps = 0, achieved_timesteps = 0;
  };
  std::map<std::string, Accum> per_cat;
  Accum overall;

  for (const auto& rec : records) {
    auto it = by_id.find(rec.task_id);
    if (it == by_id.end())
      throw std::invalid_argument("record for unknown task '" + rec.task_id + "'");
    const TaskSpec& spec = *it->second;

    double gcr = 1.0 - static_cast<double>(rec.missing_goals.size()) /
                           static_cast<double>(spec.goal_conditions.size());
    if (gcr < 0) gcr = 0;
    double exe = rec.executed == 0 ? 1.0
                                   : static_cast<double>(rec.executable) /
                                         static_cast<double>(rec.executed);

    for (Accum* acc : {&per_cat[spec.category], &overall}) {
      acc->tasks += 1;
      acc->gcr_sum += gcr;
      acc->exe_sum += exe;
      if (rec.success) {
        acc->successes += 1;
        acc->gt_transitions += spec.gt_transitions;
        acc->achieved_transitions += rec.transitions;
        acc->gt_timesteps += spec.gt_timesteps;
        acc->achieved_timesteps += rec.makespan;
      }
    }
  }

  auto finalize = [](const Accum& a) {
    MetricValues v;
    v.tasks = a.tasks;
    if (a.tasks == 0) return v;
    v.sr = static_cast<double>(a.successes) / a.tasks;
    v.gcr = a.gcr_sum / a.tasks;
    v.exe = a.exe_sum / a.tasks;
    // RU and Eff are assessed only on successful executions; orientation is
    // ground-truth/achieved so 1.0 is optimal
    if (a.successes > 0 && a.achieved_transitions > 0 && a.achieved_timesteps > 0) {
      v.ru = static_cast<double>(a.gt_transitions) / static_cast<double>(a.achieved_transitions);
      v.eff = static_cast<double>(a.gt_timesteps) / static_cast<double>(a.achieved_timesteps);
      v.ru_eff_defined = true;
    }
    return v;
  };

  MetricsReport report;
  for (const auto& [cat, acc] : per_cat) report.per_category[cat] = finalize(acc);
  report.overall = finalize(overall);
  return report;
}

std::string render_report(const MetricsReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "category" << std::right;
  for (const char* col : {"SR", "Exe", "GCR", "RU", "Eff"}) os << std::setw(8) << col;
  os << std::setw(8) << "tasks" << "\n";
  auto row = [&](const std::string& name, const MetricValues& v) {
    os << std::left << std::setw(12) << name << std::right << std::fixed << std::setprecision(2);
    os << std::setw(8) << v.sr << std::setw(8) << v.exe << std::setw(8) << v.gcr;
    if (v.ru_eff_defined)
      os << std::setw(8) << v.ru << std::setw(8) << v.eff;
    else
      os << std::setw(8) << "--" << std::setw(8) << "--";
    os << std::setw(8) << v.tasks << "\n";
    os.unsetf(std::ios::fixed);
  };
  for (const char* cat : {"compound", "complex", "vague"}) {
    auto it = report.per_category.find(cat);
    if (it != report.per_category.end()) row(it->first, it->second);
  }
  for (const auto& [cat, v] : report.per_category)
    if (!known_categories().count(cat)) row(cat, v);
  row("overall", report.overall);
  return os.str();
}

namespace {

json metric_values_to_json(const MetricValues& v) {
  return json{{"SR", v.sr},   {"Exe", v.exe},
              {"GCR", v.gcr}, {"RU", v.ru},
              {"Eff", v.eff}, {"ru_eff_defined", v.ru_eff_defined},
              {"tasks", v.tasks}};
}

MetricValues metric_values_from_json(const json& j) {
  MetricValues v;
  v.sr = j.at("SR").get<double>();
  v.exe = j.at("Exe").get<double>();
  v.gcr = j.at("GCR").get<double>();
  v.ru = j.at("RU").get<double>();
  v.eff = j.at("Eff").get<double>();
  v.ru_eff_defined = j.value("ru_eff_defined", true);
  v.tasks = j.value("tasks", 0);
  return v;
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  json j;
  for (const auto& [cat, v] : report.per_category) j["categories"][cat] = metric_values_to_json(v);
  j["overall"] = metric_values_to_json(report.overall);
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  json j = json::parse(text);
  MetricsReport report;
  if (j.contains("categories"))
    for (const auto& [cat, jv] : j["categories"].items())
      report.per_category[cat] = metric_values_from_json(jv);
  if (j.contains("overall")) report.overall = metric_values_from_json(j["overall"]);
  return report;
}

std::string records_to_json(const std::vector<RunRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back(json{{"task_id", r.task_id},
                       {"success", r.success},
                       {"executed", r.executed},
                       {"executable", r.executable},
                       {"makespan", r.makespan},
                       {"transitions", r.transitions},
                       {"final_state", r.final_state},
                       {"missing_goals", r.missing_goals},
                       {"failure", r.failure}});
  }
  return json{{"records", arr}}.dump(2) + "\n";
}

std::vector<RunRecord> records_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<RunRecord> out;
  for (const auto& jr : j.at("records")) {
    RunRecord r;
    r.task_id = jr.at("task_id").get<std::string>();
    r.success = jr.at("success").get<bool>();
    r.executed = jr.at("executed").get<int>();
    r.executable = jr.at("executable").get<int>();
    r.makespan = jr.at("makespan").get<int>();
    r.transitions = jr.at("transitions").get<int>();
    for (const auto& s : jr.value("final_state", json::array())) r.final_state.push_back(s.get<std::string>());
    for (const auto& s : jr.value("missing_goals", json::array()))
      r.missing_goals.push_back(s.get<std::string>());
    r.failure = jr.value("failure", "");
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, Gain> aggregate_improvement(const MetricsReport& ours,
                                                  const MetricsReport& baseline,
                                                  const std::map<std::string, double>& weights) {
  for (const auto& [cat, w] : weights) {
    (void)w;
    if (!ours.per_category.count(cat) || !baseline.per_category.count(cat))
      throw std::invalid_argument("both reports must cover category '" + cat + "'");
  }
  double total_weight = 0;
  for (const auto& [cat, w] : weights) total_weight += w;
  if (total_weight <= 0) throw std::invalid_argument("weights must sum to a positive value");

  auto weighted = [&](const MetricsReport& r, auto getter) {
    double acc = 0;
    for (const auto& [cat, w] : weights) acc += w * getter(r.per_category.at(cat));
    return acc / total_weight;
  };

  std::map<std::string, Gain> gains;
  auto add = [&](const std::string& name, auto getter) {
    Gain g;
    g.ours = weighted(ours, getter);
    g.baseline = weighted(baseline, getter);
    if (g.baseline == 0) {
      g.unbounded = true;
      g.relative = std::numeric_limits<double>::infinity();
    } else {
      g.relative = (g.ours - g.baseline) / g.baseline;
    }
    gains[name] = g;
  };
  add("SR", [](const MetricValues& v) { return v.sr; });
  add("Exe", [](const MetricValues& v) { return v.exe; });
  add("GCR", [](const MetricValues& v) { return v.gcr; });
  add("RU", [](const MetricValues& v) { return v.ru; });
  add("Eff", [](const MetricValues& v) { return v.eff; });
  return gains;
}

std::string render_gains(const std::map<std::string, Gain>& gains) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "metric" << std::right << std::setw(10) << "ours"
     << std::setw(10) << "baseline" << std::setw(10) << "gain" << "\n";
  for (const char* name : {"SR", "Exe", "GCR", "RU", "Eff"}) {
    auto it = gains.find(name);
    if (it == gains.end()) continue;
    const Gain& g = it->second;
    os << std::left << std::setw(8) << name << std::right << std::fixed << std::setprecision(3)
       << std::setw(10) << g.ours << std::setw(10) << g.baseline;
    if (g.unbounded)
      os << std::setw(10) << "inf";
    else
      os << std::setprecision(1) << std::setw(9) << g.relative * 100 << "%";
    os << "\n";
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

}  // namespace mrplan
