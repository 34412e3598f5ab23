#pragma once

// Instantiates lifted schemas into a search-ready ground task. Atom ids are
// deterministic: sorted by (predicate name, argument tuple), lower-cased.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrplan/pddl.hpp"

namespace mrplan {

enum class ExecMode { Auto, Serial, Parallel };

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  std::string key() const;   // lower-case lookup key
  std::string name() const;  // display, e.g. "at-location(Egg, Plate)"
};

struct GroundAction {
  std::string schema;
  std::vector<std::string> args;
  std::vector<int32_t> pre_pos, pre_neg, add, del;  // sorted atom ids
  double cost = 1.0;

  std::string name() const;  // display, e.g. "PickupObject(Robot2, Egg, Location1)"
};

struct State {
  std::vector<int32_t> atoms;  // sorted, unique

  bool contains(int32_t id) const;
  void insert(int32_t id);
  void erase(int32_t id);
  bool operator==(const State&) const = default;
};

struct StateHash {
  size_t operator()(const State& s) const;
};

struct GroundTask {
  std::vector<GroundAtom> atoms;
  std::vector<GroundAction> actions;
  State init;
  std::vector<int32_t> goal_pos;
  std::vector<int32_t> goal_neg;

  size_t actions_before_pruning = 0;  // raw type-product count
  size_t actions_dropped_static = 0;  // unsatisfiable against static init facts

  int32_t find_atom(std::string_view key) const;  // -1 when absent
  int32_t find_action(std::string_view schema, const std::vector<std::string>& args) const;
  const std::string& atom_name(int32_t id) const;

  std::unordered_map<std::string, int32_t> atom_index;
  std::unordered_map<std::string, int32_t> action_index;
  mutable std::vector<std::string> atom_names_;  // cached display names
};

struct GroundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GroundOptions {
  size_t max_actions = 1'000'000;
  bool compile_static = true;
  ExecMode exec = ExecMode::Auto;
};

GroundTask ground(const Domain& d, const Problem& p, const GroundOptions& opts = {});

// Drops actions not applicable under delete relaxation from init.
GroundTask prune_unreachable(const GroundTask& task);

// One action per line with pre/add/del atom names (debug listing).
std::string dump_ground_task(const GroundTask& task);

}  // namespace mrplan
