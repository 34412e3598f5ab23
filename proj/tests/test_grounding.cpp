#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mrplan/kernels.hpp"
#include "mrplan/util.hpp"
#include "oracles.hpp"

using namespace mrplan;

namespace {

const std::string kDataDir = std::string(MRPLAN_SOURCE_DIR) + "/data";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Domain load_domain(const std::string& rel) {
  auto res = parse_domain(read_file(kDataDir + rel));
  REQUIRE(res.ok());
  return *res.value;
}

Problem load_problem(const std::string& rel, const Domain& d) {
  auto res = parse_problem(read_file(kDataDir + rel), d);
  REQUIRE(res.ok());
  return *res.value;
}

Problem make_problem(const Domain& d, int robots, int objects) {
  Problem p;
  p.name = "counts";
  p.domain_name = d.name;
  for (int i = 0; i < robots; ++i) p.objects.push_back({"R" + std::to_string(i), "robot", {}});
  for (int i = 0; i < objects; ++i) p.objects.push_back({"O" + std::to_string(i), "object", {}});
  return p;
}

}  // namespace

TEST_CASE("type-product counts: robot2 domain with 1 robot and 4 objects yields 36 raw actions") {
  Domain d = load_domain("/domains/robot2.pddl");
  REQUIRE(d.actions.size() == 3);  // GoToObject/2, PickupObject/3, PutObject/3
  GroundOptions opts;
  opts.compile_static = false;
  GroundTask task = ground(d, make_problem(d, 1, 4), opts);
  CHECK(task.actions_before_pruning == 36);  // 1*4 + 1*4*4 + 1*4*4
  CHECK(task.actions.size() == 36);
}

TEST_CASE("zero objects of a type: only all-robot-typed schemas instantiate") {
  Domain d = load_domain("/domains/robot2.pddl");
  GroundTask task = ground(d, make_problem(d, 2, 0));
  CHECK(task.actions_before_pruning == 0);  // every schema has an object-typed parameter
}

TEST_CASE("grounding count identity on random type profiles") {
  Domain d = load_domain("/domains/robot3.pddl");
  std::mt19937 rng(11u);
  for (int iter = 0; iter < 20; ++iter) {
    int robots = std::uniform_int_distribution<int>(0, 3)(rng);
    int objects = std::uniform_int_distribution<int>(0, 5)(rng);
    GroundTask task = ground(d, make_problem(d, robots, objects));
    size_t expected = 0;
    for (const auto& schema : d.actions) {
      size_t product = 1;
      for (const auto& param : schema.params)
        product *= iequals(param.type, "robot") ? static_cast<size_t>(robots)
                                                : static_cast<size_t>(objects);
      expected += product;
    }
    CHECK(task.actions_before_pruning == expected);
  }
}

TEST_CASE("prepare-plate-with-egg grounds with the expected init atoms") {
  Domain d = load_domain("/domains/robot2.pddl");
  Problem p = load_problem("/problems/prepare_plate_with_egg.pddl", d);
  GroundTask task = ground(d, p);
  REQUIRE(task.init.atoms.size() == 3);
  std::vector<std::string> names;
  for (int32_t id : task.init.atoms) names.push_back(task.atom_name(id));
  CHECK(names == std::vector<std::string>{"at(Robot2, InitLoaction)", "at-location(Egg, Location1)",
                                          "at-location(Plate, Location2)"});
  CHECK(task.goal_pos.size() == 1);
  CHECK(task.goal_neg.size() == 2);
}

TEST_CASE("ground-action limit guards combinatorial blow-up") {
  Domain d = load_domain("/domains/robot3.pddl");
  GroundOptions opts;
  opts.max_actions = 100;
  CHECK_THROWS_AS(ground(d, make_problem(d, 2, 6), opts), GroundError);
}

TEST_CASE("atom ids are sorted by predicate name then argument tuple") {
  Domain d = load_domain("/domains/robot2.pddl");
  Problem p = load_problem("/problems/prepare_plate_with_egg.pddl", d);
  GroundTask task = ground(d, p);
  auto tuple_of = [](const GroundAtom& a) {
    std::vector<std::string> t{to_lower(a.predicate)};
    for (const auto& arg : a.args) t.push_back(to_lower(arg));
    return t;
  };
  for (size_t i = 0; i + 1 < task.atoms.size(); ++i)
    CHECK(tuple_of(task.atoms[i]) < tuple_of(task.atoms[i + 1]));
}

TEST_CASE("aliased effect arguments resolve delete-before-add") {
  // one action whose add and del collide under an aliasing binding
  std::string text = R"((define (domain d)
  (:types object)
  (:predicates (p ?a - object ?b - object))
  (:action Swap
    :parameters (?a - object ?b - object)
    :precondition (and)
    :effect (and (p ?a ?b) (not (p ?b ?a))))))";
  auto dres = parse_domain(text);
  REQUIRE(dres.ok());
  Problem p;
  p.name = "alias";
  p.domain_name = "d";
  p.objects = {{"X", "object", {}}};
  GroundOptions opts;
  opts.compile_static = false;
  GroundTask task = ground(*dres.value, p, opts);
  REQUIRE(task.actions.size() == 1);  // Swap(X, X)
  CHECK(task.actions[0].add.size() == 1);
  CHECK(task.actions[0].del.empty());  // atom in both lands in add only
}

TEST_CASE("static atoms are compiled out of preconditions") {
  std::string text = R"((define (domain d)
  (:types object)
  (:predicates (fixed ?o - object) (flag ?o - object))
  (:action Set
    :parameters (?o - object)
    :precondition (and (fixed ?o))
    :effect (and (flag ?o)))))";
  auto dres = parse_domain(text);
  REQUIRE(dres.ok());
  Problem p;
  p.name = "statics";
  p.domain_name = "d";
  p.objects = {{"A", "object", {}}, {"B", "object", {}}};
  p.init = {{"fixed", {"A"}, false, {}}};  // fixed(B) stays false forever

  GroundTask task = ground(*dres.value, p);
  REQUIRE(task.actions.size() == 1);  // Set(B) dropped as statically unsatisfiable
  CHECK(task.actions[0].args == std::vector<std::string>{"A"});
  CHECK(task.actions[0].pre_pos.empty());  // satisfied static precondition removed
  CHECK(task.actions_dropped_static == 1);
}

// ---------------------------------------------------------------------------
// relaxed reachability
// ---------------------------------------------------------------------------

namespace {

GroundTask chain_task(int length, int init_atom) {
  // atoms p0..p<length>, action a_i: {p_i} -> add {p_{i+1}}
  GroundTask task;
  for (int i = 0; i <= length; ++i) {
    task.atoms.push_back({"p" + std::to_string(i), {}});
    task.atom_index.emplace(task.atoms.back().key(), i);
  }
  for (int i = 0; i < length; ++i) {
    GroundAction a;
    a.schema = "a" + std::to_string(i);
    a.pre_pos = {i};
    a.add = {i + 1};
    task.actions.push_back(std::move(a));
  }
  task.init.insert(init_atom);
  task.goal_pos = {length};
  return task;
}

}  // namespace

TEST_CASE("relaxed reachability on a linear chain") {
  GroundTask task = chain_task(3, 0);
  Reachability r = relaxed_reachability(task);
  for (int i = 0; i <= 3; ++i) CHECK(r.atom_reachable[static_cast<size_t>(i)]);
  for (int i = 0; i < 3; ++i) CHECK(r.action_applicable[static_cast<size_t>(i)]);
}

TEST_CASE("chain with a later init atom leaves the prefix unreachable") {
  GroundTask task = chain_task(3, 1);
  Reachability r = relaxed_reachability(task);
  CHECK(!r.atom_reachable[0]);
  CHECK(!r.action_applicable[0]);
  CHECK(r.atom_reachable[1]);
  CHECK(r.atom_reachable[3]);
}

TEST_CASE("prepare-plate-with-egg goal atom is relaxed-reachable") {
  Domain d = load_domain("/domains/robot2.pddl");
  Problem p = load_problem("/problems/prepare_plate_with_egg.pddl", d);
  GroundTask task = ground(d, p);
  Reachability r = relaxed_reachability(task);
  int32_t goal = task.find_atom(GroundAtom{"at-location", {"Egg", "Plate"}}.key());
  REQUIRE(goal >= 0);
  CHECK(r.atom_reachable[static_cast<size_t>(goal)]);

  // agreement with the independently coded fixpoint
  auto naive = oracle::reachable_naive(task);
  for (size_t i = 0; i < task.atoms.size(); ++i)
    CHECK(static_cast<bool>(r.atom_reachable[i]) == (naive.count(task.atoms[i].name()) > 0));
}

TEST_CASE("soundness of relaxation pruning on random tasks") {
  std::mt19937 rng(31u);
  for (int iter = 0; iter < 150; ++iter) {
    GroundTask task = oracle::random_task(rng);
    Reachability r = relaxed_reachability(task);
    bool goal_reachable = true;
    for (int32_t id : task.goal_pos)
      if (!r.atom_reachable[static_cast<size_t>(id)]) goal_reachable = false;
    if (!goal_reachable) {
      // unrelaxed task must be unsolvable too
      CHECK(!oracle::bfs_optimal_cost(task).has_value());
    }
  }
}

TEST_CASE("prune_unreachable keeps exactly the applicable actions") {
  GroundTask task = chain_task(3, 1);
  GroundTask pruned = prune_unreachable(task);
  CHECK(pruned.actions.size() == 2);
  CHECK(pruned.atoms.size() == task.atoms.size());
}
