#pragma once

// Lifted PDDL model for the supported subset: STRIPS + :typing +
// :negative-preconditions, conjunctive goals, unit action costs.
// Identifiers compare case-insensitively and print case-preserved.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrplan {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;

  // line-oriented "severity:line:col:message" form used by the CLI
  std::string to_line() const;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics& diags);
std::string render_diagnostics(const Diagnostics& diags);

struct TypedName {
  std::string name;
  std::string type;
  SourcePos pos{};
};

// A (possibly negated) predicate application over variables and/or objects.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;
  bool negated = false;
  SourcePos pos{};
};

bool same_literal(const Literal& a, const Literal& b);
std::string render_literal(const Literal& l);
std::optional<Literal> parse_literal(std::string_view text, std::string* error = nullptr);

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  SourcePos pos{};
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;  // conjunction
  std::vector<Literal> effect;        // conjunction
  double cost = 1.0;                  // unit by default; not part of the file syntax
  SourcePos pos{};
};

struct Domain {
  std::string name;
  std::vector<std::string> types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const ActionSchema* find_action(std::string_view name) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  bool has_type(std::string_view name) const;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;           // as declared in :objects
  std::vector<TypedName> implicit_objects;  // referenced in init/goal, auto-typed `object`
  std::vector<Literal> init;                // positive ground atoms (closed world)
  std::vector<Literal> goal;                // ground literals, conjunction

  const TypedName* find_object(std::string_view name) const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  Diagnostics diagnostics;

  bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

ParseResult<Domain> parse_domain(std::string_view text);
ParseResult<Problem> parse_problem(std::string_view text, const Domain& domain);

std::string render_domain(const Domain& d);
std::string render_problem(const Problem& p);

Diagnostics check_well_formed(const Domain& d);
Diagnostics check_well_formed(const Domain& d, const Problem& p);

// Structural equality modulo identifier case; used by round-trip checks.
bool structurally_equal(const Domain& a, const Domain& b);
bool structurally_equal(const Problem& a, const Problem& b);

// Token sequence of a PDDL text (comments stripped, case preserved).
std::vector<std::string> tokenize_for_comparison(std::string_view text);

}  // namespace mrplan
