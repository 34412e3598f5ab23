#include "mrplan/kernels.hpp"

#include <algorithm>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mrplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool pick_parallel(ExecMode exec, size_t work) {
#ifdef _OPENMP
  if (exec == ExecMode::Parallel) return true;
  if (exec == ExecMode::Serial) return false;
  return work >= 8192;
#else
  (void)exec;
  (void)work;
  return false;
#endif
}

}  // namespace

// Least fixpoint of: reachable = from ∪ adds of actions whose positive
// preconditions are reachable. Negative preconditions are treated as
// satisfiable (standard delete-relaxation convention).
Reachability reachability_serial(const GroundTask& task, const State& from) {
  Reachability r;
  r.atom_reachable.assign(task.atoms.size(), 0);
  r.action_applicable.assign(task.actions.size(), 0);
  for (int32_t id : from.atoms) r.atom_reachable[static_cast<size_t>(id)] = 1;

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t ai = 0; ai < task.actions.size(); ++ai) {
      if (r.action_applicable[ai]) continue;
      const GroundAction& a = task.actions[ai];
      bool ok = true;
      for (int32_t id : a.pre_pos)
        if (!r.atom_reachable[static_cast<size_t>(id)]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      r.action_applicable[ai] = 1;
      for (int32_t id : a.add) {
        if (!r.atom_reachable[static_cast<size_t>(id)]) {
          r.atom_reachable[static_cast<size_t>(id)] = 1;
          changed = true;
        }
      }
      changed = true;
    }
  }
  return r;
}

Reachability reachability_parallel(const GroundTask& task, const State& from) {
#ifndef _OPENMP
  return reachability_serial(task, from);
#else
  Reachability r;
  r.atom_reachable.assign(task.atoms.size(), 0);
  r.action_applicable.assign(task.actions.size(), 0);
  for (int32_t id : from.atoms) r.atom_reachable[static_cast<size_t>(id)] = 1;

  // Jacobi sweeps: each sweep marks actions against the previous sweep's atom
  // set, then merges their adds. Monotone, so the fixpoint matches the serial
  // reference.
  bool changed = true;
  while (changed) {
    changed = false;
#pragma omp parallel for schedule(static) reduction(|| : changed)
    for (long long ai = 0; ai < static_cast<long long>(task.actions.size()); ++ai) {
      if (r.action_applicable[static_cast<size_t>(ai)]) continue;
      const GroundAction& a = task.actions[static_cast<size_t>(ai)];
      bool ok = true;
      for (int32_t id : a.pre_pos)
        if (!r.atom_reachable[static_cast<size_t>(id)]) {
          ok = false;
          break;
        }
      if (ok) {
        r.action_applicable[static_cast<size_t>(ai)] = 1;
        changed = true;
      }
    }
    if (!changed) break;
    bool added = false;
#pragma omp parallel for schedule(static) reduction(|| : added)
    for (long long ai = 0; ai < static_cast<long long>(task.actions.size()); ++ai) {
      if (!r.action_applicable[static_cast<size_t>(ai)]) continue;
      const GroundAction& a = task.actions[static_cast<size_t>(ai)];
      for (int32_t id : a.add) {
        if (!r.atom_reachable[static_cast<size_t>(id)]) {
          r.atom_reachable[static_cast<size_t>(id)] = 1;  // monotone flag set; races are benign
          added = true;
        }
      }
    }
    changed = added;
  }
  return r;
#endif
}

Reachability relaxed_reachability(const GroundTask& task, const State& from, ExecMode exec) {
  return pick_parallel(exec, task.actions.size()) ? reachability_parallel(task, from)
                                                  : reachability_serial(task, from);
}

Reachability relaxed_reachability(const GroundTask& task, ExecMode exec) {
  return relaxed_reachability(task, task.init, exec);
}

namespace {

// Candidate value of achieving through `a`: cost(a) + agg over pre_pos values.
// Precondition ids are sorted, so the summation order is fixed.
double achiever_value(const GroundAction& a, const std::vector<double>& value, RelaxAggregate agg) {
  double acc = 0.0;
  for (int32_t id : a.pre_pos) {
    double v = value[static_cast<size_t>(id)];
    if (v == kInf) return kInf;
    if (agg == RelaxAggregate::Max)
      acc = std::max(acc, v);
    else
      acc += v;
  }
  return a.cost + acc;
}

void fill_best_supporters(const GroundTask& task, RelaxationTable& t, const State& from,
                          RelaxAggregate agg) {
  t.best_supporter.assign(task.atoms.size(), -1);
  std::vector<double> best(task.atoms.size(), kInf);
  for (size_t ai = 0; ai < task.actions.size(); ++ai) {
    const GroundAction& a = task.actions[ai];
    double v = achiever_value(a, t.value, agg);
    if (v == kInf) continue;
    for (int32_t id : a.add) {
      size_t s = static_cast<size_t>(id);
      if (from.contains(id)) continue;
      if (v < best[s]) {
        best[s] = v;
        t.best_supporter[s] = static_cast<int32_t>(ai);
      }
    }
  }
}

}  // namespace

RelaxationTable relaxed_costs_serial(const GroundTask& task, const State& from, RelaxAggregate agg) {
  RelaxationTable t;
  t.value.assign(task.atoms.size(), kInf);
  for (int32_t id : from.atoms) t.value[static_cast<size_t>(id)] = 0.0;

  // Bellman-style sweeps to the unique least fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const GroundAction& a : task.actions) {
      double v = achiever_value(a, t.value, agg);
      if (v == kInf) continue;
      for (int32_t id : a.add) {
        if (v < t.value[static_cast<size_t>(id)]) {
          t.value[static_cast<size_t>(id)] = v;
          changed = true;
        }
      }
    }
  }
  fill_best_supporters(task, t, from, agg);
  return t;
}

RelaxationTable relaxed_costs_parallel(const GroundTask& task, const State& from, RelaxAggregate agg) {
#ifndef _OPENMP
  return relaxed_costs_serial(task, from, agg);
#else
  RelaxationTable t;
  t.value.assign(task.atoms.size(), kInf);
  for (int32_t id : from.atoms) t.value[static_cast<size_t>(id)] = 0.0;

  // Jacobi sweeps with a double buffer: new values are computed from the
  // previous sweep only, so thread scheduling cannot affect the result.
  std::vector<double> next(t.value.size());
  bool changed = true;
  while (changed) {
    changed = false;
    std::copy(t.value.begin(), t.value.end(), next.begin());
#pragma omp parallel
    {
      std::vector<double> local(t.value.size(), kInf);
#pragma omp for schedule(static) nowait
      for (long long ai = 0; ai < static_cast<long long>(task.actions.size()); ++ai) {
        const GroundAction& a = task.actions[static_cast<size_t>(ai)];
        double v = achiever_value(a, t.value, agg);
        if (v == kInf) continue;
        for (int32_t id : a.add) {
          size_t s = static_cast<size_t>(id);
          if (v < local[s]) local[s] = v;
        }
      }
#pragma omp critical
      for (size_t s = 0; s < next.size(); ++s)
        if (local[s] < next[s]) next[s] = local[s];
    }
    for (size_t s = 0; s < next.size(); ++s) {
      if (next[s] < t.value[s]) {
        changed = true;
        break;
      }
    }
    t.value.swap(next);
  }
  fill_best_supporters(task, t, from, agg);
  return t;
#endif
}

RelaxationTable relaxed_costs(const GroundTask& task, const State& from, RelaxAggregate agg,
                              ExecMode exec) {
  return pick_parallel(exec, task.actions.size()) ? relaxed_costs_parallel(task, from, agg)
                                                  : relaxed_costs_serial(task, from, agg);
}

}  // namespace mrplan
