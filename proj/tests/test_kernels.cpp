#include <random>

#include "doctest.h"
#include "mrplan/kernels.hpp"
#include "oracles.hpp"

using namespace mrplan;

// The OpenMP kernels must reproduce the serial reference bit for bit.

TEST_CASE("reachability: serial and parallel agree on random tasks") {
  std::mt19937 rng(101u);
  for (int iter = 0; iter < 100; ++iter) {
    oracle::RandomTaskParams params;
    params.max_atoms = 12;
    params.max_actions = 24;
    GroundTask task = oracle::random_task(rng, params);
    Reachability s = reachability_serial(task, task.init);
    Reachability p = reachability_parallel(task, task.init);
    CHECK(s.atom_reachable == p.atom_reachable);
    CHECK(s.action_applicable == p.action_applicable);
  }
}

TEST_CASE("relaxed cost tables: serial and parallel agree on random tasks") {
  std::mt19937 rng(102u);
  for (int iter = 0; iter < 100; ++iter) {
    oracle::RandomTaskParams params;
    params.max_atoms = 12;
    params.max_actions = 24;
    GroundTask task = oracle::random_task(rng, params);
    for (auto agg : {RelaxAggregate::Max, RelaxAggregate::Add}) {
      RelaxationTable s = relaxed_costs_serial(task, task.init, agg);
      RelaxationTable p = relaxed_costs_parallel(task, task.init, agg);
      CHECK(s.value == p.value);
      CHECK(s.best_supporter == p.best_supporter);
    }
  }
}

TEST_CASE("relaxed cost tables match the naive fixpoint oracle") {
  std::mt19937 rng(103u);
  for (int iter = 0; iter < 100; ++iter) {
    GroundTask task = oracle::random_task(rng);
    for (bool additive : {false, true}) {
      RelaxationTable t = relaxed_costs(
          task, task.init, additive ? RelaxAggregate::Add : RelaxAggregate::Max);
      auto naive = oracle::relaxed_fixpoint_naive(task, task.init, additive);
      for (size_t i = 0; i < task.atoms.size(); ++i)
        CHECK(t.value[i] == naive.at(task.atoms[i].name()));
    }
  }
}

TEST_CASE("explicit exec modes agree with auto selection") {
  std::mt19937 rng(104u);
  GroundTask task = oracle::random_task(rng);
  Reachability a = relaxed_reachability(task, ExecMode::Auto);
  Reachability s = relaxed_reachability(task, ExecMode::Serial);
  Reachability p = relaxed_reachability(task, ExecMode::Parallel);
  CHECK(a.atom_reachable == s.atom_reachable);
  CHECK(s.atom_reachable == p.atom_reachable);
}
