#pragma once

// Front half of the pipeline: precondition identification, task allocation,
// per-robot PDDL problem generation, and the replan fallback. All language-
// model calls go through the LmProvider interface.

#include <filesystem>
#include <optional>

#include "mrplan/provider.hpp"
#include "mrplan/search.hpp"
#include "mrplan/validate.hpp"

namespace mrplan {

struct RobotProfile {
  std::string id;
  Domain domain;  // the robot's skill operators
  std::string initial_location;

  std::vector<std::string> skills() const;  // action schema names
  bool has_skill(std::string_view name) const;
};

struct Scene {
  struct Object {
    std::string name;
    std::string type = "object";
    std::string location;  // empty for zones/docks
  };
  std::vector<Object> objects;
  std::vector<Literal> extra_init;  // opened/switched-on/... ground atoms

  // at-location atoms for located objects plus extra_init
  std::vector<Literal> initial_atoms() const;
  bool has_object(std::string_view name) const;
};

// One proposed action step with simplified preconditions P' and effects E',
// subsets of the named skill schema's declared ones after substitution.
struct ActionSketch {
  std::string skill;
  std::vector<std::string> args;  // "?vars" or object names
  std::vector<Literal> preconditions;
  std::vector<Literal> effects;
  std::string note;  // free-text description line
};

struct Subtask {
  std::string id;  // "subtask1", ...
  int ordinal = 0;
  std::string description;
  std::vector<std::string> required_skills;
  std::vector<Literal> goal;
  std::vector<ActionSketch> steps;
  std::vector<std::string> after;  // subtask ids this one depends on
};

struct Decomposition {
  std::vector<Subtask> subtasks;

  const Subtask* find(std::string_view id) const;
  std::string render() const;  // the pinned response layout, re-emitted
};

struct RobotShare {
  std::string robot;
  std::vector<std::string> skills;  // covered skill names
};

// Dependency endpoint: a subtask, optionally narrowed to a robot's share and
// a skill within it.
struct AllocRef {
  std::string subtask;
  std::string robot;  // empty = whole subtask
  std::string skill;  // empty = share boundary (last/first step)
};

struct AllocEdge {
  AllocRef from, to;
};

struct Allocation {
  struct Entry {
    std::string subtask;
    std::vector<RobotShare> shares;
  };
  std::vector<Entry> entries;
  std::vector<AllocEdge> edges;

  const Entry* find(std::string_view subtask) const;
  std::string to_json() const;
  static Allocation from_json(const std::string& text);
};

struct DecomposeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnallocatableSubtask : DecomposeError {
  UnallocatableSubtask(const std::string& subtask, const std::string& skill)
      : DecomposeError("no robot combination covers skill " + skill + " required by " + subtask),
        subtask_id(subtask),
        skill_name(skill) {}
  std::string subtask_id;
  std::string skill_name;
};

struct PlanningFailed : std::runtime_error {
  PlanningFailed(std::string msg, std::vector<std::string> attempt_reasons)
      : std::runtime_error(std::move(msg)), attempts(std::move(attempt_reasons)) {}
  std::vector<std::string> attempts;
};

struct DecomposeConfig {
  int max_retries = 3;
  std::string scenario;  // fixture key for the mock provider
};

Decomposition identify_preconditions(const std::string& instruction, const Scene& scene,
                                     const std::vector<RobotProfile>& robots, const LmProvider& lm,
                                     const DecomposeConfig& cfg);

Diagnostics validate_decomposition(const Decomposition& d, const Scene& scene,
                                   const std::vector<RobotProfile>& robots);

Allocation allocate(const Decomposition& d, const std::vector<RobotProfile>& robots,
                    const LmProvider& lm, const DecomposeConfig& cfg);

// Provider emits raw PDDL; parsed and well-formedness-checked against the
// robot's domain, re-prompting with the diagnostics embedded on failure.
Problem generate_problem(const Subtask& subtask, const Scene& scene, const RobotProfile& robot,
                         const LmProvider& lm, const DecomposeConfig& cfg,
                         Diagnostics* warnings = nullptr);

// search.plan first; on Unsolvable/ResourceLimit asks the provider for action
// sketches and validates them, up to cfg.max_retries attempts.
Plan replan_loop(const GroundTask& task, const Subtask& subtask, const RobotProfile& robot,
                 const LmProvider& lm, const SearchConfig& search_cfg, const DecomposeConfig& cfg,
                 bool* used_provider = nullptr);

// Deterministic fallback allocation (greedy split by descending skill
// coverage, tie-break by robot id); also used to check provider proposals.
std::vector<RobotShare> cover_subtask(const Subtask& st, const std::vector<RobotProfile>& robots);

// Response-format parsers (exposed for tests).
std::optional<Decomposition> parse_decomposition_response(const std::string& text,
                                                          std::string* error = nullptr);
std::optional<Allocation> parse_allocation_response(const std::string& text,
                                                    const Decomposition& d,
                                                    std::string* error = nullptr);

// Scene / robot-profile file loading (JSON).
Scene load_scene(const std::filesystem::path& file);
RobotProfile load_robot_profile(const std::filesystem::path& file);

}  // namespace mrplan
