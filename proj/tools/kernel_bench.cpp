// Benchmark comparing the serial reference kernels against the OpenMP
// variants on synthetic delivery-style tasks, verifying identical results.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mrplan/heuristics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace mrplan;
using clock_type = std::chrono::steady_clock;

namespace {

// Synthetic lifted task: R robots move between L locations and ferry P
// packages; grounding blows up as R*L^2 + 2*R*P*L actions.
std::pair<Domain, Problem> synthetic_task(int robots, int locations, int packages) {
  std::ostringstream d;
  d << "(define (domain ferry)\n"
       "  (:types robot object)\n"
       "  (:predicates\n"
       "    (at ?r - robot ?l - object)\n"
       "    (at-location ?p - object ?l - object)\n"
       "    (holding ?r - robot ?p - object)\n"
       "    (is-location ?l - object))\n"
       "  (:action Move\n"
       "    :parameters (?r - robot ?from - object ?to - object)\n"
       "    :precondition (and (at ?r ?from) (is-location ?from) (is-location ?to))\n"
       "    :effect (and (at ?r ?to) (not (at ?r ?from))))\n"
       "  (:action Load\n"
       "    :parameters (?r - robot ?p - object ?l - object)\n"
       "    :precondition (and (at ?r ?l) (at-location ?p ?l) (is-location ?l))\n"
       "    :effect (and (holding ?r ?p) (not (at-location ?p ?l))))\n"
       "  (:action Unload\n"
       "    :parameters (?r - robot ?p - object ?l - object)\n"
       "    :precondition (and (at ?r ?l) (holding ?r ?p) (is-location ?l))\n"
       "    :effect (and (at-location ?p ?l) (not (holding ?r ?p))))\n"
       ")\n";
  std::ostringstream p;
  p << "(define (problem ferry-run)\n  (:domain ferry)\n  (:objects\n";
  for (int i = 0; i < robots; ++i) p << "    R" << i << " - robot\n";
  for (int i = 0; i < locations; ++i) p << "    L" << i << " - object\n";
  for (int i = 0; i < packages; ++i) p << "    P" << i << " - object\n";
  p << "  )\n  (:init\n";
  for (int i = 0; i < locations; ++i) p << "    (is-location L" << i << ")\n";
  for (int i = 0; i < robots; ++i) p << "    (at R" << i << " L" << (i % locations) << ")\n";
  for (int i = 0; i < packages; ++i) p << "    (at-location P" << i << " L" << (i % locations) << ")\n";
  p << "  )\n  (:goal (and\n";
  for (int i = 0; i < packages; ++i)
    p << "    (at-location P" << i << " L" << ((i + 1) % locations) << ")\n";
  p << "  ))\n)\n";

  auto dr = parse_domain(d.str());
  auto pr = parse_problem(p.str(), *dr.value);
  return {*dr.value, *pr.value};
}

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <typename F>
std::pair<double, decltype(std::declval<F>()())> timed(F&& f) {
  auto t0 = clock_type::now();
  auto result = f();
  return {ms_since(t0), std::move(result)};
}

bool equal_tables(const RelaxationTable& a, const RelaxationTable& b) {
  return a.value == b.value && a.best_supporter == b.best_supporter;
}

bool equal_reach(const Reachability& a, const Reachability& b) {
  return a.atom_reachable == b.atom_reachable && a.action_applicable == b.action_applicable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int robots = 4, locations = 24, packages = 40, repeats = 3;
  app.add_option("--robots", robots);
  app.add_option("--locations", locations);
  app.add_option("--packages", packages);
  app.add_option("--repeats", repeats);
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::cout << "OpenMP enabled, max threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "OpenMP not available; parallel variants run the serial path\n";
#endif

  auto [domain, problem] = synthetic_task(robots, locations, packages);

  GroundOptions serial_opts;
  serial_opts.exec = ExecMode::Serial;
  serial_opts.max_actions = 50'000'000;
  GroundOptions parallel_opts = serial_opts;
  parallel_opts.exec = ExecMode::Parallel;

  std::cout << std::left << std::setw(16) << "kernel" << std::right << std::setw(12) << "serial ms"
            << std::setw(12) << "openmp ms" << std::setw(10) << "speedup" << std::setw(9) << "equal"
            << "\n";

  auto report = [&](const std::string& name, double ts, double tp, bool equal) {
    std::cout << std::left << std::setw(16) << name << std::right << std::fixed
              << std::setprecision(2) << std::setw(12) << ts << std::setw(12) << tp << std::setw(10)
              << (tp > 0 ? ts / tp : 0.0) << std::setw(9) << (equal ? "yes" : "NO") << "\n";
    std::cout.unsetf(std::ios::fixed);
    if (!equal) std::exit(1);
  };

  double ts_total = 0, tp_total = 0;
  GroundTask task_serial, task_parallel;
  for (int r = 0; r < repeats; ++r) {
    auto [ts, a] = timed([&] { return ground(domain, problem, serial_opts); });
    auto [tp, b] = timed([&] { return ground(domain, problem, parallel_opts); });
    ts_total += ts;
    tp_total += tp;
    task_serial = std::move(a);
    task_parallel = std::move(b);
  }
  bool ground_equal = task_serial.atoms.size() == task_parallel.atoms.size() &&
                      task_serial.actions.size() == task_parallel.actions.size();
  for (size_t i = 0; ground_equal && i < task_serial.actions.size(); ++i)
    ground_equal = task_serial.actions[i].name() == task_parallel.actions[i].name() &&
                   task_serial.actions[i].pre_pos == task_parallel.actions[i].pre_pos &&
                   task_serial.actions[i].add == task_parallel.actions[i].add &&
                   task_serial.actions[i].del == task_parallel.actions[i].del;
  report("ground", ts_total / repeats, tp_total / repeats, ground_equal);

  const GroundTask& task = task_serial;
  std::cout << "  task: " << task.atoms.size() << " atoms, " << task.actions.size()
            << " actions\n";

  ts_total = tp_total = 0;
  Reachability ra, rb;
  for (int r = 0; r < repeats; ++r) {
    auto [ts, a] = timed([&] { return reachability_serial(task, task.init); });
    auto [tp, b] = timed([&] { return reachability_parallel(task, task.init); });
    ts_total += ts;
    tp_total += tp;
    ra = std::move(a);
    rb = std::move(b);
  }
  report("reachability", ts_total / repeats, tp_total / repeats, equal_reach(ra, rb));

  for (auto agg : {RelaxAggregate::Add, RelaxAggregate::Max}) {
    ts_total = tp_total = 0;
    RelaxationTable ta, tb;
    for (int r = 0; r < repeats; ++r) {
      auto [ts, a] = timed([&] { return relaxed_costs_serial(task, task.init, agg); });
      auto [tp, b] = timed([&] { return relaxed_costs_parallel(task, task.init, agg); });
      ts_total += ts;
      tp_total += tp;
      ta = std::move(a);
      tb = std::move(b);
    }
    report(agg == RelaxAggregate::Add ? "h_add table" : "h_max table", ts_total / repeats,
           tp_total / repeats, equal_tables(ta, tb));
  }

  return 0;
}
