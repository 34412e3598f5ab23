#pragma once

// Data-parallel inner loops of the planner: relaxed reachability and the
// delete-relaxation cost tables. Each kernel has an OpenMP variant and a
// serial reference implementation kept for testing; results are identical
// (the fixpoints are unique and per-action arithmetic order is fixed).

#include <cstdint>
#include <vector>

#include "mrplan/grounding.hpp"

namespace mrplan {

struct Reachability {
  std::vector<uint8_t> atom_reachable;
  std::vector<uint8_t> action_applicable;
};

Reachability relaxed_reachability(const GroundTask& task, ExecMode exec = ExecMode::Auto);
Reachability relaxed_reachability(const GroundTask& task, const State& from,
                                  ExecMode exec = ExecMode::Auto);

Reachability reachability_serial(const GroundTask& task, const State& from);
Reachability reachability_parallel(const GroundTask& task, const State& from);

enum class RelaxAggregate { Max, Add };

// Per-atom cost-to-achieve under delete relaxation; best_supporter is the
// extraction-ready achiever (argmin by value, then action id), -1 for atoms
// in the state or unreachable ones.
struct RelaxationTable {
  std::vector<double> value;
  std::vector<int32_t> best_supporter;
};

RelaxationTable relaxed_costs(const GroundTask& task, const State& from, RelaxAggregate agg,
                              ExecMode exec = ExecMode::Auto);

RelaxationTable relaxed_costs_serial(const GroundTask& task, const State& from, RelaxAggregate agg);
RelaxationTable relaxed_costs_parallel(const GroundTask& task, const State& from, RelaxAggregate agg);

}  // namespace mrplan
