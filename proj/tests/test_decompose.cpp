#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mrplan/decompose.hpp"
#include "mrplan/util.hpp"

using namespace mrplan;

namespace {

const std::string kData = std::string(MRPLAN_SOURCE_DIR) + "/data";
const std::string kUnitFixtures = std::string(MRPLAN_SOURCE_DIR) + "/tests/fixtures";

RobotProfile robot(const std::string& archetype) {
  return load_robot_profile(kData + "/robots/" + archetype + ".json");
}

Scene c1_scene() { return load_scene(kData + "/scenes/c1_egg_apple.json"); }

MockProvider data_fixtures() { return MockProvider::from_directory(kData + "/fixtures"); }
MockProvider unit_fixtures() { return MockProvider::from_directory(kUnitFixtures); }

}  // namespace

TEST_CASE("egg/apple instruction decomposes into two independent subtasks") {
  Scene scene = c1_scene();
  std::vector<RobotProfile> robots = {robot("robot3"), robot("robot4")};
  MockProvider provider = data_fixtures();
  DecomposeConfig cfg{3, "c1_egg_apple"};

  Decomposition d = identify_preconditions("Put the egg in the fridge and prepare apple slices.",
                                           scene, robots, provider, cfg);
  REQUIRE(d.subtasks.size() == 2);
  CHECK(d.subtasks[0].id == "subtask1");
  CHECK(d.subtasks[0].required_skills ==
        std::vector<std::string>{"GoToObject", "PickupObject", "PutObject", "OpenObject"});
  CHECK(d.subtasks[0].after.empty());
  CHECK(d.subtasks[1].after.empty());
  CHECK(d.subtasks[0].steps.size() == 6);
  CHECK(validate_decomposition(d, scene, robots).empty());
}

TEST_CASE("single-subtask go-to decomposition carries the inaction precondition") {
  Scene scene;
  scene.objects = {{"Apple", "object", ""}};
  std::vector<RobotProfile> robots = {robot("robot2")};
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "go_to_apple"};

  Decomposition d = identify_preconditions("go to the apple", scene, robots, provider, cfg);
  REQUIRE(d.subtasks.size() == 1);
  REQUIRE(d.subtasks[0].steps.size() == 1);
  const ActionSketch& sketch = d.subtasks[0].steps[0];
  CHECK(sketch.skill == "GoToObject");
  REQUIRE(sketch.preconditions.size() == 1);
  CHECK(same_literal(sketch.preconditions[0], {"inaction", {"?robot"}, true, {}}));
}

TEST_CASE("a decomposition naming an unknown skill is rejected with the skill named") {
  Scene scene;
  scene.objects = {{"Apple", "object", ""}};
  std::vector<RobotProfile> robots = {robot("robot2")};
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "unknown_skill"};
  try {
    identify_preconditions("fly to the apple", scene, robots, provider, cfg);
    FAIL("expected DecomposeError");
  } catch (const DecomposeError& e) {
    CHECK(std::string(e.what()).find("FlyToObject") != std::string::npos);
  }
}

TEST_CASE("sketch literals outside the declared schema sets are flagged") {
  std::vector<RobotProfile> robots = {robot("robot2")};
  Scene scene;
  scene.objects = {{"Egg", "object", ""}, {"Plate", "object", ""}};

  Decomposition d;
  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;
  st.description = "test";
  st.required_skills = {"GoToObject"};
  ActionSketch sketch;
  sketch.skill = "GoToObject";
  sketch.args = {"?robot", "Egg"};
  sketch.preconditions = {{"holding", {"?robot", "Egg"}, false, {}}};  // not in GoTo's P
  st.steps = {sketch};
  st.goal = {{"at", {"?robot", "Egg"}, false, {}}};
  d.subtasks = {st};

  Diagnostics diags = validate_decomposition(d, scene, robots);
  CHECK(has_errors(diags));
  CHECK(render_diagnostics(diags).find("(holding ?robot Egg)") != std::string::npos);

  // the subset-conforming variant passes
  d.subtasks[0].steps[0].preconditions = {{"inaction", {"?robot"}, true, {}}};
  CHECK(!has_errors(validate_decomposition(d, scene, robots)));
}

TEST_CASE("goal literals over unknown objects are ungroundable") {
  std::vector<RobotProfile> robots = {robot("robot2")};
  Scene scene;
  scene.objects = {{"Egg", "object", ""}};

  Decomposition d;
  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;
  st.required_skills = {"GoToObject"};
  ActionSketch sketch;
  sketch.skill = "GoToObject";
  sketch.args = {"?robot", "Egg"};
  st.steps = {sketch};
  st.goal = {{"at-location", {"Egg", "Basement"}, false, {}}};
  d.subtasks = {st};

  Diagnostics diags = validate_decomposition(d, scene, robots);
  CHECK(has_errors(diags));
  CHECK(render_diagnostics(diags).find("ungroundable goal") != std::string::npos);
}

// ---------------------------------------------------------------------------
// allocation
// ---------------------------------------------------------------------------

TEST_CASE("drawer subtask splits between the opener and the placer with a skill edge") {
  Scene scene = load_scene(kData + "/scenes/x1_drawer.json");
  std::vector<RobotProfile> robots = {robot("robot1"), robot("robot2")};
  MockProvider provider = data_fixtures();
  DecomposeConfig cfg{3, "x1_drawer"};

  Decomposition d = identify_preconditions(
      "Put the keys and the watch in the drawer, then turn off the desk lamp and the laptop.",
      scene, robots, provider, cfg);
  Allocation alloc = allocate(d, robots, provider, cfg);

  const Allocation::Entry* s1 = alloc.find("subtask1");
  REQUIRE(s1 != nullptr);
  REQUIRE(s1->shares.size() == 2);
  CHECK(s1->shares[0].robot == "Robot1");
  CHECK(s1->shares[1].robot == "Robot2");

  bool open_before_put = false;
  for (const auto& e : alloc.edges) {
    if (iequals(e.from.subtask, "subtask1") && iequals(e.from.robot, "Robot1") &&
        iequals(e.from.skill, "OpenObject") && iequals(e.to.robot, "Robot2") &&
        iequals(e.to.skill, "PutObject"))
      open_before_put = true;
  }
  CHECK(open_before_put);

  // JSON round-trip
  Allocation back = Allocation::from_json(alloc.to_json());
  CHECK(back.entries.size() == alloc.entries.size());
  CHECK(back.edges.size() == alloc.edges.size());
}

TEST_CASE("two identical robots take one subtask each when the provider says so") {
  Domain d2 = robot("robot2").domain;
  RobotProfile a{.id = "RobotA", .domain = d2, .initial_location = ""};
  RobotProfile b{.id = "RobotB", .domain = d2, .initial_location = ""};
  Scene scene;
  scene.objects = {{"Egg", "object", "Table"}, {"Cup", "object", "Table"},
                   {"Table", "object", ""},   {"Sink", "object", ""}};
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "alloc_pair"};

  Decomposition d = identify_preconditions("move the egg and the cup", scene, {a, b}, provider, cfg);
  Allocation alloc = allocate(d, {a, b}, provider, cfg);
  REQUIRE(alloc.entries.size() == 2);
  REQUIRE(alloc.entries[0].shares.size() == 1);
  REQUIRE(alloc.entries[1].shares.size() == 1);
  CHECK(alloc.entries[0].shares[0].robot == "RobotA");
  CHECK(alloc.entries[1].shares[0].robot == "RobotB");
}

TEST_CASE("a skill no robot possesses raises UnallocatableSubtask") {
  std::vector<RobotProfile> robots = {robot("robot1")};  // no SliceObject anywhere
  Decomposition d;
  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;
  st.required_skills = {"GoToObject", "SliceObject"};
  ActionSketch s1{"GoToObject", {"?robot", "Apple"}, {}, {}, ""};
  ActionSketch s2{"SliceObject", {"?robot", "Apple"}, {}, {}, ""};
  st.steps = {s1, s2};
  d.subtasks = {st};

  MockProvider provider;  // no fixtures needed: the check fires first
  DecomposeConfig cfg{3, "none"};
  try {
    allocate(d, robots, provider, cfg);
    FAIL("expected UnallocatableSubtask");
  } catch (const UnallocatableSubtask& e) {
    CHECK(e.skill_name == "SliceObject");
    CHECK(e.subtask_id == "subtask1");
  }
}

TEST_CASE("skill-coverage soundness over randomized robot/skill configurations") {
  std::mt19937 rng(900u);
  const std::vector<std::string> all_skills = {"GoToObject",     "PickupObject",  "PutObject",
                                               "OpenObject",     "CloseObject",   "SwitchOnObject",
                                               "SwitchOffObject", "SliceObject"};
  Domain full = robot("robot3").domain;

  for (int iter = 0; iter < 60; ++iter) {
    // random robots with random skill subsets (GoToObject always included)
    std::vector<RobotProfile> robots;
    int n_robots = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int r = 0; r < n_robots; ++r) {
      RobotProfile rp;
      rp.id = "Robot" + std::to_string(r + 1);
      rp.domain.name = "d" + std::to_string(r + 1);
      rp.domain.types = full.types;
      rp.domain.predicates = full.predicates;
      for (const auto& schema : full.actions) {
        bool keep = schema.name == "GoToObject" || std::uniform_int_distribution<int>(0, 1)(rng);
        if (keep) rp.domain.actions.push_back(schema);
      }
      robots.push_back(std::move(rp));
    }
    // random subtask requiring a random subset
    Subtask st;
    st.id = "subtask1";
    st.ordinal = 1;
    st.required_skills = {"GoToObject"};
    for (const auto& s : all_skills)
      if (s != "GoToObject" && std::uniform_int_distribution<int>(0, 2)(rng) == 0)
        st.required_skills.push_back(s);
    for (const auto& s : st.required_skills) st.steps.push_back({s, {}, {}, {}, ""});

    bool coverable = true;
    for (const auto& s : st.required_skills) {
      bool anyone = false;
      for (const auto& r : robots)
        if (r.has_skill(s)) anyone = true;
      if (!anyone) coverable = false;
    }

    if (!coverable) {
      CHECK_THROWS_AS(cover_subtask(st, robots), UnallocatableSubtask);
      continue;
    }
    std::vector<RobotShare> shares = cover_subtask(st, robots);
    for (const auto& skill : st.required_skills) {
      bool covered = false;
      for (const auto& share : shares)
        for (const auto& r : robots)
          if (iequals(r.id, share.robot) && r.has_skill(skill)) covered = true;
      CHECK(covered);
    }
  }
}

// ---------------------------------------------------------------------------
// problem generation + replan loop
// ---------------------------------------------------------------------------

TEST_CASE("generated problem for the plate subtask matches the listing structurally") {
  Scene scene = load_scene(kData + "/scenes/c3_plate_plant.json");
  RobotProfile r2 = robot("robot2");
  MockProvider provider = data_fixtures();
  DecomposeConfig cfg{3, "c3_plate_plant"};

  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;
  st.description = "Prepare plate with egg";
  st.goal = {{"at-location", {"Egg", "Plate"}, false, {}}};

  Problem p = generate_problem(st, scene, r2, provider, cfg);
  CHECK(iequals(p.name, "prepare-plate-with-egg"));
  CHECK(p.objects.size() == 5);
  bool goal_found = false;
  for (const auto& l : p.goal)
    if (same_literal(l, {"at-location", {"Egg", "Plate"}, false, {}})) goal_found = true;
  CHECK(goal_found);
  CHECK(!has_errors(check_well_formed(r2.domain, p)));
}

TEST_CASE("the repair loop re-prompts once and accepts the corrected problem") {
  RobotProfile r2 = robot("robot2");
  Scene scene;
  scene.objects = {{"Egg", "object", "Table"}, {"Table", "object", ""}, {"Plate", "object", ""}};
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "repair_loop"};

  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;
  st.description = "egg to plate";
  st.goal = {{"at-location", {"Egg", "Plate"}, false, {}}};

  Problem p = generate_problem(st, scene, r2, provider, cfg);
  CHECK(iequals(p.name, "egg-to-plate-fixed"));
}

TEST_CASE("an empty generated goal is flagged with a warning") {
  RobotProfile r2 = robot("robot2");
  Scene scene;
  scene.objects = {{"Egg", "object", ""}};
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "empty_goal"};
  Subtask st;
  st.id = "subtask1";
  st.ordinal = 1;

  Diagnostics warnings;
  Problem p = generate_problem(st, scene, r2, provider, cfg, &warnings);
  CHECK(p.goal.empty());
  bool flagged = false;
  for (const auto& w : warnings)
    if (w.message.find("empty goal") != std::string::npos) flagged = true;
  CHECK(flagged);
}

TEST_CASE("replan loop returns the search plan without provider calls when solvable") {
  RobotProfile r2 = robot("robot2");
  auto pres = parse_problem(
      "(define (problem p) (:domain robot2) (:objects Robot2 - robot Egg Table Plate - object) "
      "(:init (at-location Egg Table)) (:goal (and (at-location Egg Plate))))",
      r2.domain);
  REQUIRE(pres.ok());
  GroundTask task = ground(r2.domain, *pres.value);

  Subtask st;
  st.id = "subtask1";
  MockProvider provider;  // empty: any provider call would throw
  DecomposeConfig cfg{3, "none"};
  bool used_provider = true;
  Plan p = replan_loop(task, st, r2, provider, SearchConfig{}, cfg, &used_provider);
  CHECK(!used_provider);
  CHECK(validate_plan(task, p).valid());
}

TEST_CASE("replan loop falls back to a provider sketch under a tiny search limit") {
  const std::string kDataDir = kData;
  RobotProfile r2 = robot("robot2");
  auto pres = parse_problem(
      std::string("(define (problem p) (:domain robot2) ") +
          "(:objects Robot2 - robot Egg Plate Location1 Location2 - object) " +
          "(:init (at-location Egg Location1) (at-location Plate Location2)) " +
          "(:goal (and (at-location Egg Plate))))",
      r2.domain);
  REQUIRE(pres.ok());
  GroundTask task = ground(r2.domain, *pres.value);

  Subtask st;
  st.id = "subtask1";
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "replan_egg"};
  SearchConfig search_cfg;
  search_cfg.max_expansions = 1;  // force the fallback

  bool used_provider = false;
  Plan p = replan_loop(task, st, r2, provider, search_cfg, cfg, &used_provider);
  CHECK(used_provider);
  CHECK(p.actions.size() == 4);
  CHECK(validate_plan(task, p).valid());

  // the BFS oracle agrees the sketch is optimal
  // (4 actions, same as the provider sketch)
  CHECK(p.cost == 4.0);
}

TEST_CASE("replan loop fails after max_retries invalid sketches") {
  RobotProfile r2 = robot("robot2");
  auto pres = parse_problem(
      "(define (problem p) (:domain robot2) (:objects Robot2 - robot Egg Plate - object) "
      "(:init) (:goal (and (at-location Egg Plate))))",
      r2.domain);
  REQUIRE(pres.ok());
  GroundTask task = ground(r2.domain, *pres.value);

  Subtask st;
  st.id = "subtask1";
  MockProvider provider = unit_fixtures();
  DecomposeConfig cfg{3, "replan_bad"};
  SearchConfig search_cfg;
  search_cfg.max_expansions = 1;

  try {
    replan_loop(task, st, r2, provider, search_cfg, cfg);
    FAIL("expected PlanningFailed");
  } catch (const PlanningFailed& e) {
    CHECK(e.attempts.size() >= 3);
  }
}

TEST_CASE("decomposition renders back in the pinned response layout") {
  Scene scene = c1_scene();
  std::vector<RobotProfile> robots = {robot("robot3"), robot("robot4")};
  MockProvider provider = data_fixtures();
  DecomposeConfig cfg{3, "c1_egg_apple"};
  Decomposition d = identify_preconditions("x", scene, robots, provider, cfg);
  std::string rendered = d.render();
  auto reparsed = parse_decomposition_response(rendered);
  REQUIRE(reparsed.has_value());
  CHECK(reparsed->subtasks.size() == d.subtasks.size());
  CHECK(reparsed->subtasks[0].required_skills == d.subtasks[0].required_skills);
  CHECK(reparsed->subtasks[0].steps.size() == d.subtasks[0].steps.size());
}
