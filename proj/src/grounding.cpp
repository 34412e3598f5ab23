#include "mrplan/grounding.hpp"

#include <algorithm>
#include <sstream>

#include "mrplan/kernels.hpp"
#include "mrplan/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mrplan {

std::string GroundAtom::key() const {
  std::string k = to_lower(predicate);
  for (const auto& a : args) {
    k += '|';
    k += to_lower(a);
  }
  return k;
}

std::string GroundAtom::name() const {
  std::string n = predicate + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) n += ", ";
    n += args[i];
  }
  n += ")";
  return n;
}

std::string GroundAction::name() const {
  std::string n = schema + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) n += ", ";
    n += args[i];
  }
  n += ")";
  return n;
}

bool State::contains(int32_t id) const {
  return std::binary_search(atoms.begin(), atoms.end(), id);
}

void State::insert(int32_t id) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), id);
  if (it == atoms.end() || *it != id) atoms.insert(it, id);
}

void State::erase(int32_t id) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), id);
  if (it != atoms.end() && *it == id) atoms.erase(it);
}

size_t StateHash::operator()(const State& s) const {
  uint64_t h = 1469598103934665603ull;
  for (int32_t a : s.atoms) {
    h ^= static_cast<uint64_t>(a) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

int32_t GroundTask::find_atom(std::string_view key) const {
  auto it = atom_index.find(std::string(key));
  return it == atom_index.end() ? -1 : it->second;
}

int32_t GroundTask::find_action(std::string_view schema, const std::vector<std::string>& args) const {
  std::string k = to_lower(schema);
  for (const auto& a : args) {
    k += '|';
    k += to_lower(a);
  }
  auto it = action_index.find(k);
  return it == action_index.end() ? -1 : it->second;
}

const std::string& GroundTask::atom_name(int32_t id) const {
  if (atom_names_.size() != atoms.size()) {
    atom_names_.resize(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i) atom_names_[i] = atoms[i].name();
  }
  return atom_names_[static_cast<size_t>(id)];
}

namespace {

struct SchemaInstantiation {
  const ActionSchema* schema = nullptr;
  std::vector<std::vector<const TypedName*>> candidates;  // per param
  size_t count = 0;   // product of candidate sizes
  size_t offset = 0;  // first assignment index in the global action order
};

std::vector<std::string> decode_assignment(const SchemaInstantiation& inst, size_t index) {
  std::vector<std::string> args(inst.candidates.size());
  size_t rem = index;
  for (size_t p = inst.candidates.size(); p-- > 0;) {
    size_t n = inst.candidates[p].size();
    args[p] = inst.candidates[p][rem % n]->name;
    rem /= n;
  }
  return args;
}

GroundAtom instantiate_literal(const Literal& l, const ActionSchema& schema,
                               const std::vector<std::string>& args) {
  GroundAtom atom;
  atom.predicate = l.predicate;
  atom.args.reserve(l.args.size());
  for (const auto& a : l.args) {
    size_t pi = 0;
    for (; pi < schema.params.size(); ++pi)
      if (iequals(schema.params[pi].name, a)) break;
    atom.args.push_back(args[pi]);
  }
  return atom;
}

bool use_parallel(ExecMode exec, size_t work) {
#ifdef _OPENMP
  if (exec == ExecMode::Parallel) return true;
  if (exec == ExecMode::Serial) return false;
  return work >= 16384;
#else
  (void)exec;
  (void)work;
  return false;
#endif
}

}  // namespace

GroundTask ground(const Domain& d, const Problem& p, const GroundOptions& opts) {
  GroundTask task;

  // objects grouped by type (declared order, implicit objects appended)
  std::vector<TypedName> objects = p.objects;
  objects.insert(objects.end(), p.implicit_objects.begin(), p.implicit_objects.end());

  std::vector<SchemaInstantiation> insts;
  size_t total = 0;
  for (const auto& schema : d.actions) {
    SchemaInstantiation inst;
    inst.schema = &schema;
    inst.candidates.resize(schema.params.size());
    inst.count = 1;
    for (size_t pi = 0; pi < schema.params.size(); ++pi) {
      for (const auto& o : objects)
        if (iequals(o.type, schema.params[pi].type)) inst.candidates[pi].push_back(&o);
      inst.count *= inst.candidates[pi].size();
    }
    inst.offset = total;
    total += inst.count;
    insts.push_back(std::move(inst));
  }
  task.actions_before_pruning = total;
  if (total > opts.max_actions)
    throw GroundError("grounding would create " + std::to_string(total) +
                      " actions, above the limit of " + std::to_string(opts.max_actions) +
                      "; raise the limit or shrink the problem");

  // Pass 1: collect every atom appearing in init, goal, or any ground action.
  std::vector<std::string> keys;
  std::vector<GroundAtom> raw_atoms;
  auto collect = [&](std::vector<GroundAtom>& out, const GroundAtom& a) { out.push_back(a); };

  for (const auto& l : p.init) collect(raw_atoms, GroundAtom{l.predicate, l.args});
  for (const auto& l : p.goal) collect(raw_atoms, GroundAtom{l.predicate, l.args});

  const bool par = use_parallel(opts.exec, total);
  if (par) {
#ifdef _OPENMP
    std::vector<std::vector<GroundAtom>> buckets;
#pragma omp parallel
    {
#pragma omp single
      buckets.resize(static_cast<size_t>(omp_get_num_threads()));
      auto& mine = buckets[static_cast<size_t>(omp_get_thread_num())];
      for (const auto& inst : insts) {
#pragma omp for nowait
        for (long long idx = 0; idx < static_cast<long long>(inst.count); ++idx) {
          auto args = decode_assignment(inst, static_cast<size_t>(idx));
          for (const auto& l : inst.schema->precondition)
            collect(mine, instantiate_literal(l, *inst.schema, args));
          for (const auto& l : inst.schema->effect)
            collect(mine, instantiate_literal(l, *inst.schema, args));
        }
      }
    }
    for (auto& b : buckets)
      raw_atoms.insert(raw_atoms.end(), std::make_move_iterator(b.begin()),
                       std::make_move_iterator(b.end()));
#endif
  } else {
    for (const auto& inst : insts) {
      for (size_t idx = 0; idx < inst.count; ++idx) {
        auto args = decode_assignment(inst, idx);
        for (const auto& l : inst.schema->precondition)
          collect(raw_atoms, instantiate_literal(l, *inst.schema, args));
        for (const auto& l : inst.schema->effect)
          collect(raw_atoms, instantiate_literal(l, *inst.schema, args));
      }
    }
  }

  // Deterministic ids: sort by (predicate, args) as a tuple, case-insensitively.
  auto atom_less = [](const GroundAtom& a, const GroundAtom& b) {
    std::string pa = to_lower(a.predicate), pb = to_lower(b.predicate);
    if (pa != pb) return pa < pb;
    for (size_t i = 0; i < a.args.size() && i < b.args.size(); ++i) {
      std::string xa = to_lower(a.args[i]), xb = to_lower(b.args[i]);
      if (xa != xb) return xa < xb;
    }
    return a.args.size() < b.args.size();
  };
  std::sort(raw_atoms.begin(), raw_atoms.end(), atom_less);
  raw_atoms.erase(std::unique(raw_atoms.begin(), raw_atoms.end(),
                              [](const GroundAtom& a, const GroundAtom& b) { return a.key() == b.key(); }),
                  raw_atoms.end());
  task.atoms = std::move(raw_atoms);
  task.atom_index.reserve(task.atoms.size());
  for (size_t i = 0; i < task.atoms.size(); ++i)
    task.atom_index.emplace(task.atoms[i].key(), static_cast<int32_t>(i));

  auto atom_id = [&](const GroundAtom& a) { return task.atom_index.at(a.key()); };

  for (const auto& l : p.init) task.init.insert(atom_id({l.predicate, l.args}));
  for (const auto& l : p.goal) {
    int32_t id = atom_id({l.predicate, l.args});
    (l.negated ? task.goal_neg : task.goal_pos).push_back(id);
  }
  std::sort(task.goal_pos.begin(), task.goal_pos.end());
  task.goal_pos.erase(std::unique(task.goal_pos.begin(), task.goal_pos.end()), task.goal_pos.end());
  std::sort(task.goal_neg.begin(), task.goal_neg.end());
  task.goal_neg.erase(std::unique(task.goal_neg.begin(), task.goal_neg.end()), task.goal_neg.end());

  // Pass 2: build ground actions in assignment order.
  std::vector<GroundAction> actions(total);
  auto build_one = [&](const SchemaInstantiation& inst, size_t idx) {
    GroundAction ga;
    ga.schema = inst.schema->name;
    ga.args = decode_assignment(inst, idx);
    ga.cost = inst.schema->cost;
    for (const auto& l : inst.schema->precondition) {
      int32_t id = atom_id(instantiate_literal(l, *inst.schema, ga.args));
      (l.negated ? ga.pre_neg : ga.pre_pos).push_back(id);
    }
    for (const auto& l : inst.schema->effect) {
      int32_t id = atom_id(instantiate_literal(l, *inst.schema, ga.args));
      (l.negated ? ga.del : ga.add).push_back(id);
    }
    auto dedupe = [](std::vector<int32_t>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedupe(ga.pre_pos);
    dedupe(ga.pre_neg);
    dedupe(ga.add);
    dedupe(ga.del);
    // parameter aliasing can put one atom in both add and del; deletes apply
    // first, so the atom ends true and the delete is dropped
    std::vector<int32_t> del;
    for (int32_t id : ga.del)
      if (!std::binary_search(ga.add.begin(), ga.add.end(), id)) del.push_back(id);
    ga.del = std::move(del);
    actions[inst.offset + idx] = std::move(ga);
  };

  if (par) {
#ifdef _OPENMP
#pragma omp parallel
    for (const auto& inst : insts) {
#pragma omp for nowait
      for (long long idx = 0; idx < static_cast<long long>(inst.count); ++idx)
        build_one(inst, static_cast<size_t>(idx));
    }
#endif
  } else {
    for (const auto& inst : insts)
      for (size_t idx = 0; idx < inst.count; ++idx) build_one(inst, idx);
  }

  if (opts.compile_static) {
    // atoms never added or deleted by any action are static: evaluate against
    // init and compile them out of preconditions
    std::vector<uint8_t> fluent(task.atoms.size(), 0);
    for (const auto& a : actions) {
      for (int32_t id : a.add) fluent[static_cast<size_t>(id)] = 1;
      for (int32_t id : a.del) fluent[static_cast<size_t>(id)] = 1;
    }
    std::vector<GroundAction> kept;
    kept.reserve(actions.size());
    for (auto& a : actions) {
      bool satisfiable = true;
      std::vector<int32_t> pp, pn;
      for (int32_t id : a.pre_pos) {
        if (fluent[static_cast<size_t>(id)]) {
          pp.push_back(id);
        } else if (!task.init.contains(id)) {
          satisfiable = false;
          break;
        }
      }
      if (satisfiable) {
        for (int32_t id : a.pre_neg) {
          if (fluent[static_cast<size_t>(id)]) {
            pn.push_back(id);
          } else if (task.init.contains(id)) {
            satisfiable = false;
            break;
          }
        }
      }
      if (!satisfiable) {
        ++task.actions_dropped_static;
        continue;
      }
      a.pre_pos = std::move(pp);
      a.pre_neg = std::move(pn);
      kept.push_back(std::move(a));
    }
    actions = std::move(kept);
  }

  task.actions = std::move(actions);
  task.action_index.reserve(task.actions.size());
  for (size_t i = 0; i < task.actions.size(); ++i) {
    std::string k = to_lower(task.actions[i].schema);
    for (const auto& a : task.actions[i].args) {
      k += '|';
      k += to_lower(a);
    }
    task.action_index.emplace(std::move(k), static_cast<int32_t>(i));
  }
  return task;
}

GroundTask prune_unreachable(const GroundTask& task) {
  Reachability reach = relaxed_reachability(task);
  GroundTask out;
  out.atoms = task.atoms;
  out.atom_index = task.atom_index;
  out.init = task.init;
  out.goal_pos = task.goal_pos;
  out.goal_neg = task.goal_neg;
  out.actions_before_pruning = task.actions_before_pruning;
  out.actions_dropped_static = task.actions_dropped_static;
  for (size_t i = 0; i < task.actions.size(); ++i)
    if (reach.action_applicable[i]) out.actions.push_back(task.actions[i]);
  for (size_t i = 0; i < out.actions.size(); ++i) {
    std::string k = to_lower(out.actions[i].schema);
    for (const auto& a : out.actions[i].args) {
      k += '|';
      k += to_lower(a);
    }
    out.action_index.emplace(std::move(k), static_cast<int32_t>(i));
  }
  return out;
}

std::string dump_ground_task(const GroundTask& task) {
  std::ostringstream os;
  os << "atoms: " << task.atoms.size() << "\n";
  for (size_t i = 0; i < task.atoms.size(); ++i) os << "  [" << i << "] " << task.atoms[i].name() << "\n";
  os << "init:";
  for (int32_t id : task.init.atoms) os << " " << task.atom_name(id);
  os << "\ngoal:";
  for (int32_t id : task.goal_pos) os << " " << task.atom_name(id);
  for (int32_t id : task.goal_neg) os << " !" << task.atom_name(id);
  os << "\nactions: " << task.actions.size() << " (raw " << task.actions_before_pruning << ", static-dropped "
     << task.actions_dropped_static << ")\n";
  auto names = [&](const std::vector<int32_t>& ids) {
    std::string s;
    for (size_t i = 0; i < ids.size(); ++i) {
      if (i) s += ", ";
      s += task.atom_name(ids[i]);
    }
    return s;
  };
  for (const auto& a : task.actions) {
    os << "  " << a.name() << " pre[" << names(a.pre_pos);
    if (!a.pre_neg.empty()) os << " | not: " << names(a.pre_neg);
    os << "] add[" << names(a.add) << "] del[" << names(a.del) << "]\n";
  }
  return os.str();
}

}  // namespace mrplan
