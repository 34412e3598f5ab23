#include "mrplan/pddl.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mrplan/util.hpp"

namespace mrplan {

std::string Diagnostic::to_line() const {
  std::ostringstream os;
  os << (severity == Severity::Error ? "error" : "warning") << ':' << pos.line << ':' << pos.col
     << ':' << message;
  return os.str();
}

bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

std::string render_diagnostics(const Diagnostics& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += d.to_line();
    out += '\n';
  }
  return out;
}

bool same_literal(const Literal& a, const Literal& b) {
  if (a.negated != b.negated || a.args.size() != b.args.size()) return false;
  if (!iequals(a.predicate, b.predicate)) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!iequals(a.args[i], b.args[i])) return false;
  return true;
}

std::string render_literal(const Literal& l) {
  std::string atom = "(" + l.predicate;
  for (const auto& a : l.args) atom += " " + a;
  atom += ")";
  return l.negated ? "(not " + atom + ")" : atom;
}

// ---------------------------------------------------------------------------
// Lexer + s-expression reader
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { LParen, RParen, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

struct Lexer {
  std::string_view src;
  size_t i = 0;
  int line = 1, col = 1;

  void advance_char() {
    if (i < src.size() && src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  void skip_ws_and_comments() {
    while (i < src.size()) {
      char c = src[i];
      if (c == ';') {
        while (i < src.size() && src[i] != '\n') advance_char();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance_char();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_ws_and_comments();
    Token t;
    t.pos = {line, col};
    if (i >= src.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = src[i];
    if (c == '(') {
      t.kind = Token::Kind::LParen;
      t.text = "(";
      advance_char();
      return t;
    }
    if (c == ')') {
      t.kind = Token::Kind::RParen;
      t.text = ")";
      advance_char();
      return t;
    }
    t.kind = Token::Kind::Symbol;
    size_t start = i;
    while (i < src.size()) {
      char d = src[i];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      advance_char();
    }
    t.text = std::string(src.substr(start, i - start));
    return t;
  }
};

struct Sexp {
  bool is_list = false;
  std::string text;  // symbol text when !is_list
  SourcePos pos;
  std::vector<Sexp> items;

  bool is_symbol(std::string_view s) const { return !is_list && iequals(text, s); }
};

struct ParseAbort {};

class Reader {
 public:
  Reader(std::string_view text, Diagnostics& diags) : lex_{text}, diags_(diags) {
    tok_ = lex_.next();
  }

  Sexp read() {
    Sexp e = read_one();
    if (tok_.kind != Token::Kind::End) error(tok_.pos, "trailing content after top-level form");
    return e;
  }

 private:
  Sexp read_one() {
    if (tok_.kind == Token::Kind::End) error(tok_.pos, "unexpected end of input");
    if (tok_.kind == Token::Kind::RParen) error(tok_.pos, "unexpected ')'");
    if (tok_.kind == Token::Kind::Symbol) {
      Sexp e;
      e.is_list = false;
      e.text = tok_.text;
      e.pos = tok_.pos;
      tok_ = lex_.next();
      return e;
    }
    Sexp e;
    e.is_list = true;
    e.pos = tok_.pos;
    tok_ = lex_.next();
    while (tok_.kind != Token::Kind::RParen) {
      if (tok_.kind == Token::Kind::End) error(e.pos, "unbalanced '(': missing ')'");
      e.items.push_back(read_one());
    }
    tok_ = lex_.next();
    return e;
  }

  [[noreturn]] void error(SourcePos pos, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, pos, std::move(msg)});
    throw ParseAbort{};
  }

  Lexer lex_;
  Token tok_;
  Diagnostics& diags_;
};

class AstBuilder {
 public:
  explicit AstBuilder(Diagnostics& diags) : diags_(diags) {}

  Domain build_domain(const Sexp& root) {
    require(root.is_list && root.items.size() >= 2 && root.items[0].is_symbol("define"), root.pos,
            "expected (define (domain ...) ...)");
    const Sexp& head = root.items[1];
    require(head.is_list && head.items.size() == 2 && head.items[0].is_symbol("domain") &&
                !head.items[1].is_list,
            head.pos, "expected (domain <name>)");
    Domain d;
    d.name = head.items[1].text;
    for (size_t k = 2; k < root.items.size(); ++k) {
      const Sexp& sec = root.items[k];
      require(sec.is_list && !sec.items.empty() && !sec.items[0].is_list, sec.pos,
              "expected a (:section ...) form");
      const std::string key = to_lower(sec.items[0].text);
      if (key == ":requirements") {
        check_requirements(sec);
      } else if (key == ":types") {
        parse_types(sec, d);
      } else if (key == ":predicates") {
        for (size_t j = 1; j < sec.items.size(); ++j) d.predicates.push_back(parse_predicate(sec.items[j]));
      } else if (key == ":action") {
        d.actions.push_back(parse_action(sec));
      } else {
        error(sec.pos, "unsupported domain section " + sec.items[0].text);
      }
    }
    return d;
  }

  Problem build_problem(const Sexp& root) {
    require(root.is_list && root.items.size() >= 2 && root.items[0].is_symbol("define"), root.pos,
            "expected (define (problem ...) ...)");
    const Sexp& head = root.items[1];
    require(head.is_list && head.items.size() == 2 && head.items[0].is_symbol("problem") &&
                !head.items[1].is_list,
            head.pos, "expected (problem <name>)");
    Problem p;
    p.name = head.items[1].text;
    for (size_t k = 2; k < root.items.size(); ++k) {
      const Sexp& sec = root.items[k];
      require(sec.is_list && !sec.items.empty() && !sec.items[0].is_list, sec.pos,
              "expected a (:section ...) form");
      const std::string key = to_lower(sec.items[0].text);
      if (key == ":domain") {
        require(sec.items.size() == 2 && !sec.items[1].is_list, sec.pos, "expected (:domain <name>)");
        p.domain_name = sec.items[1].text;
      } else if (key == ":objects") {
        p.objects = parse_typed_list(sec, 1, /*variables=*/false);
      } else if (key == ":init") {
        for (size_t j = 1; j < sec.items.size(); ++j) p.init.push_back(parse_literal_sexp(sec.items[j]));
      } else if (key == ":goal") {
        require(sec.items.size() == 2, sec.pos, "expected (:goal <conjunction>)");
        p.goal = parse_conjunction(sec.items[1]);
      } else {
        error(sec.pos, "unsupported problem section " + sec.items[0].text);
      }
    }
    return p;
  }

 private:
  void check_requirements(const Sexp& sec) {
    static const std::set<std::string> supported = {":strips", ":typing", ":negative-preconditions"};
    for (size_t j = 1; j < sec.items.size(); ++j) {
      const Sexp& r = sec.items[j];
      require(!r.is_list, r.pos, "malformed requirement");
      if (!supported.count(to_lower(r.text)))
        error(r.pos, "unsupported requirement " + r.text);
    }
  }

  void parse_types(const Sexp& sec, Domain& d) {
    for (size_t j = 1; j < sec.items.size(); ++j) {
      const Sexp& t = sec.items[j];
      require(!t.is_list, t.pos, "malformed type name");
      if (t.text == "-") error(t.pos, "type hierarchies are not supported");
      d.types.push_back(t.text);
    }
  }

  PredicateDecl parse_predicate(const Sexp& e) {
    require(e.is_list && !e.items.empty() && !e.items[0].is_list, e.pos, "malformed predicate declaration");
    PredicateDecl pd;
    pd.name = e.items[0].text;
    pd.pos = e.pos;
    pd.params = parse_typed_list(e, 1, /*variables=*/true);
    return pd;
  }

  // Parses "a b - t c - u" style lists starting at item `from`.
  std::vector<TypedName> parse_typed_list(const Sexp& e, size_t from, bool variables) {
    std::vector<TypedName> out;
    std::vector<std::pair<std::string, SourcePos>> pending;
    for (size_t j = from; j < e.items.size(); ++j) {
      const Sexp& it = e.items[j];
      require(!it.is_list, it.pos, "malformed typed list");
      if (it.text == "-") {
        require(j + 1 < e.items.size() && !e.items[j + 1].is_list, it.pos, "missing type after '-'");
        const std::string& type = e.items[j + 1].text;
        require(!pending.empty(), it.pos, "type without preceding names");
        for (auto& [n, pos] : pending) out.push_back({n, type, pos});
        pending.clear();
        ++j;
      } else {
        bool is_var = !it.text.empty() && it.text[0] == '?';
        if (variables && !is_var) error(it.pos, "expected variable, got " + it.text);
        if (!variables && is_var) error(it.pos, "expected object name, got " + it.text);
        pending.emplace_back(it.text, it.pos);
      }
    }
    if (!pending.empty())
      error(pending.front().second, "untyped name " + pending.front().first + " (typing is required)");
    return out;
  }

  ActionSchema parse_action(const Sexp& sec) {
    require(sec.items.size() >= 2 && !sec.items[1].is_list, sec.pos, "expected (:action <name> ...)");
    ActionSchema a;
    a.name = sec.items[1].text;
    a.pos = sec.pos;
    for (size_t j = 2; j + 1 < sec.items.size(); j += 2) {
      const Sexp& key = sec.items[j];
      const Sexp& val = sec.items[j + 1];
      require(!key.is_list, key.pos, "expected :parameters/:precondition/:effect keyword");
      const std::string k = to_lower(key.text);
      if (k == ":parameters") {
        require(val.is_list, val.pos, "expected parameter list");
        a.params = parse_typed_list(val, 0, /*variables=*/true);
      } else if (k == ":precondition") {
        a.precondition = parse_conjunction(val);
      } else if (k == ":effect") {
        a.effect = parse_conjunction(val);
      } else {
        error(key.pos, "unsupported action field " + key.text);
      }
    }
    if (sec.items.size() % 2 != 0)
      error(sec.items.back().pos, "dangling token in action definition");
    return a;
  }

  std::vector<Literal> parse_conjunction(const Sexp& e) {
    require(e.is_list, e.pos, "expected a formula");
    std::vector<Literal> out;
    if (!e.items.empty() && e.items[0].is_symbol("and")) {
      for (size_t j = 1; j < e.items.size(); ++j) out.push_back(parse_literal_sexp(e.items[j]));
    } else {
      out.push_back(parse_literal_sexp(e));
    }
    return out;
  }

  Literal parse_literal_sexp(const Sexp& e) {
    require(e.is_list && !e.items.empty() && !e.items[0].is_list, e.pos, "malformed literal");
    if (e.items[0].is_symbol("not")) {
      require(e.items.size() == 2, e.pos, "expected (not <atom>)");
      Literal l = parse_literal_sexp(e.items[1]);
      require(!l.negated, e.pos, "nested negation is not supported");
      l.negated = true;
      l.pos = e.pos;
      return l;
    }
    Literal l;
    l.predicate = e.items[0].text;
    l.pos = e.pos;
    for (size_t j = 1; j < e.items.size(); ++j) {
      require(!e.items[j].is_list, e.items[j].pos, "malformed atom argument");
      l.args.push_back(e.items[j].text);
    }
    return l;
  }

  void require(bool cond, SourcePos pos, std::string msg) {
    if (!cond) error(pos, std::move(msg));
  }

  [[noreturn]] void error(SourcePos pos, std::string msg) {
    diags_.push_back({Diagnostic::Severity::Error, pos, std::move(msg)});
    throw ParseAbort{};
  }

  Diagnostics& diags_;
};

const PredicateDecl* find_pred(const Domain& d, std::string_view name) {
  for (const auto& p : d.predicates)
    if (iequals(p.name, name)) return &p;
  return nullptr;
}

// Semantic checks over a Domain AST; appends diagnostics.
void check_domain(const Domain& d, Diagnostics& diags) {
  auto err = [&](SourcePos pos, std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, pos, std::move(msg)});
  };

  std::set<std::string> types;
  for (const auto& t : d.types) {
    if (!types.insert(to_lower(t)).second)
      diags.push_back({Diagnostic::Severity::Warning, {}, "duplicate type " + t});
  }

  std::set<std::string> pred_names;
  for (const auto& p : d.predicates) {
    if (!pred_names.insert(to_lower(p.name)).second)
      err(p.pos, "duplicate predicate " + p.name);
    std::set<std::string> seen;
    for (const auto& param : p.params) {
      if (!types.count(to_lower(param.type)))
        err(param.pos, "undeclared type " + param.type);
      if (!seen.insert(to_lower(param.name)).second)
        err(param.pos, "duplicate parameter " + param.name);
    }
  }

  std::set<std::string> action_names;
  for (const auto& a : d.actions) {
    if (!action_names.insert(to_lower(a.name)).second)
      err(a.pos, "duplicate action " + a.name);
    if (a.cost < 0) err(a.pos, "negative action cost");
    std::map<std::string, std::string> params;  // lower name -> type
    for (const auto& param : a.params) {
      if (!types.count(to_lower(param.type)))
        err(param.pos, "undeclared type " + param.type);
      if (!params.emplace(to_lower(param.name), param.type).second)
        err(param.pos, "duplicate parameter " + param.name);
    }
    auto check_formula = [&](const std::vector<Literal>& lits, const char* where) {
      for (const auto& l : lits) {
        const PredicateDecl* pd = find_pred(d, l.predicate);
        if (!pd) {
          err(l.pos, "undeclared predicate " + l.predicate);
          continue;
        }
        if (pd->params.size() != l.args.size()) {
          err(l.pos, "arity mismatch for " + l.predicate);
          continue;
        }
        for (size_t i = 0; i < l.args.size(); ++i) {
          const std::string& arg = l.args[i];
          if (!arg.empty() && arg[0] == '?') {
            auto it = params.find(to_lower(arg));
            if (it == params.end()) {
              err(l.pos, std::string("unbound variable ") + arg + " in " + where + " of " + a.name);
            } else if (!iequals(it->second, pd->params[i].type)) {
              err(l.pos, "type mismatch: " + arg + " is " + it->second + ", " + l.predicate +
                             " expects " + pd->params[i].type);
            }
          } else {
            err(l.pos, "constants in action schemas are not supported: " + arg);
          }
        }
      }
    };
    check_formula(a.precondition, "precondition");
    check_formula(a.effect, "effect");
    // no atom may appear with both polarities in one effect
    for (size_t i = 0; i < a.effect.size(); ++i)
      for (size_t j = i + 1; j < a.effect.size(); ++j) {
        Literal x = a.effect[i], y = a.effect[j];
        bool neg_x = x.negated, neg_y = y.negated;
        x.negated = y.negated = false;
        if (neg_x != neg_y && same_literal(x, y))
          err(a.effect[j].pos, "atom " + render_literal(x) + " appears with both polarities in effect of " + a.name);
      }
  }
}

std::string default_object_type(const Domain& d) {
  for (const auto& t : d.types)
    if (iequals(t, "object")) return t;
  return "";
}

// Type-checks problem literals and records implicit objects; appends diagnostics.
void check_problem_against(const Domain& d, Problem& p, bool allow_implicit, Diagnostics& diags) {
  auto err = [&](SourcePos pos, std::string msg) {
    diags.push_back({Diagnostic::Severity::Error, pos, std::move(msg)});
  };
  auto warn = [&](SourcePos pos, std::string msg) {
    diags.push_back({Diagnostic::Severity::Warning, pos, std::move(msg)});
  };

  if (!iequals(p.domain_name, d.name))
    err({}, "problem references domain " + p.domain_name + " but was parsed against " + d.name);

  std::map<std::string, std::string> object_types;  // lower name -> type
  for (const auto& o : p.objects) {
    if (!d.has_type(o.type)) err(o.pos, "undeclared type " + o.type);
    if (!object_types.emplace(to_lower(o.name), o.type).second)
      err(o.pos, "duplicate object " + o.name);
  }
  for (const auto& o : p.implicit_objects) object_types.emplace(to_lower(o.name), o.type);

  const std::string obj_type = default_object_type(d);

  auto check_literal = [&](const Literal& l, const char* where) {
    const PredicateDecl* pd = find_pred(d, l.predicate);
    if (!pd) {
      err(l.pos, "undeclared predicate " + l.predicate);
      return;
    }
    if (pd->params.size() != l.args.size()) {
      err(l.pos, "arity mismatch for " + l.predicate + " (expected " +
                     std::to_string(pd->params.size()) + " arguments)");
      return;
    }
    for (size_t i = 0; i < l.args.size(); ++i) {
      const std::string& arg = l.args[i];
      if (!arg.empty() && arg[0] == '?') {
        err(l.pos, std::string("variable ") + arg + " not allowed in " + where);
        continue;
      }
      auto it = object_types.find(to_lower(arg));
      if (it == object_types.end()) {
        if (allow_implicit && !obj_type.empty() && iequals(pd->params[i].type, obj_type)) {
          warn(l.pos, "object " + arg + " is not declared in :objects; assuming type " + obj_type);
          p.implicit_objects.push_back({arg, obj_type, l.pos});
          object_types.emplace(to_lower(arg), obj_type);
        } else {
          err(l.pos, "undeclared object " + arg);
        }
        continue;
      }
      if (!iequals(it->second, pd->params[i].type))
        err(l.pos, "type mismatch: " + arg + " is " + it->second + ", " + l.predicate + " expects " +
                       pd->params[i].type);
    }
  };

  for (const auto& l : p.init) check_literal(l, "init");
  for (const auto& l : p.goal) check_literal(l, "goal");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

const ActionSchema* Domain::find_action(std::string_view n) const {
  for (const auto& a : actions)
    if (iequals(a.name, n)) return &a;
  return nullptr;
}

const PredicateDecl* Domain::find_predicate(std::string_view n) const { return find_pred(*this, n); }

bool Domain::has_type(std::string_view n) const {
  for (const auto& t : types)
    if (iequals(t, n)) return true;
  return false;
}

const TypedName* Problem::find_object(std::string_view n) const {
  for (const auto& o : objects)
    if (iequals(o.name, n)) return &o;
  for (const auto& o : implicit_objects)
    if (iequals(o.name, n)) return &o;
  return nullptr;
}

ParseResult<Domain> parse_domain(std::string_view text) {
  ParseResult<Domain> res;
  try {
    Reader reader(text, res.diagnostics);
    Sexp root = reader.read();
    AstBuilder builder(res.diagnostics);
    Domain d = builder.build_domain(root);
    check_domain(d, res.diagnostics);
    if (!has_errors(res.diagnostics)) res.value = std::move(d);
  } catch (const ParseAbort&) {
  }
  return res;
}

ParseResult<Problem> parse_problem(std::string_view text, const Domain& domain) {
  ParseResult<Problem> res;
  try {
    Reader reader(text, res.diagnostics);
    Sexp root = reader.read();
    AstBuilder builder(res.diagnostics);
    Problem p = builder.build_problem(root);

    // closed world: negative init literals are already false; drop with a warning
    std::vector<Literal> init;
    for (auto& l : p.init) {
      if (l.negated) {
        res.diagnostics.push_back({Diagnostic::Severity::Warning, l.pos,
                                   "negative init literal " + render_literal(l) +
                                       " dropped (closed world)"});
      } else {
        init.push_back(std::move(l));
      }
    }
    p.init = std::move(init);

    check_problem_against(domain, p, /*allow_implicit=*/true, res.diagnostics);
    if (!has_errors(res.diagnostics)) res.value = std::move(p);
  } catch (const ParseAbort&) {
  }
  return res;
}

namespace {

std::string render_typed_params(const std::vector<TypedName>& params) {
  std::string out = "(";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) out += " ";
    out += params[i].name + " - " + params[i].type;
  }
  out += ")";
  return out;
}

// Groups consecutive names of equal type: "Egg Plate - object".
std::string render_typed_groups(const std::vector<TypedName>& names, const std::string& indent) {
  std::string out;
  size_t i = 0;
  while (i < names.size()) {
    size_t j = i;
    while (j < names.size() && iequals(names[j].type, names[i].type)) ++j;
    out += indent;
    for (size_t k = i; k < j; ++k) out += names[k].name + " ";
    out += "- " + names[i].type + "\n";
    i = j;
  }
  return out;
}

std::string render_conjunction(const std::vector<Literal>& lits, const std::string& indent) {
  std::string out = "(and";
  for (const auto& l : lits) out += "\n" + indent + render_literal(l);
  out += ")";
  return out;
}

}  // namespace

std::string render_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& t : d.types) os << " " << t;
    os << ")\n";
  }
  if (!d.predicates.empty()) {
    os << "  (:predicates\n";
    for (const auto& p : d.predicates) {
      os << "    (" << p.name;
      for (const auto& param : p.params) os << " " << param.name << " - " << param.type;
      os << ")\n";
    }
    os << "  )\n";
  }
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n";
    os << "    :parameters " << render_typed_params(a.params) << "\n";
    os << "    :precondition " << render_conjunction(a.precondition, "      ") << "\n";
    os << "    :effect " << render_conjunction(a.effect, "      ") << "\n";
    os << "  )\n";
  }
  os << ")\n";
  return os.str();
}

std::string render_problem(const Problem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  os << "  (:objects\n" << render_typed_groups(p.objects, "    ") << "  )\n";
  os << "  (:init\n";
  for (const auto& l : p.init) os << "    " << render_literal(l) << "\n";
  os << "  )\n";
  os << "  (:goal " << render_conjunction(p.goal, "    ") << ")\n";
  os << ")\n";
  return os.str();
}

Diagnostics check_well_formed(const Domain& d) {
  Diagnostics diags;
  check_domain(d, diags);
  return diags;
}

Diagnostics check_well_formed(const Domain& d, const Problem& p) {
  Diagnostics diags;
  check_domain(d, diags);
  Problem copy = p;  // implicit-object discovery must not mutate the caller's view
  check_problem_against(d, copy, /*allow_implicit=*/false, diags);
  return diags;
}

namespace {

bool equal_typed(const std::vector<TypedName>& a, const std::vector<TypedName>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!iequals(a[i].name, b[i].name) || !iequals(a[i].type, b[i].type)) return false;
  return true;
}

bool equal_literals(const std::vector<Literal>& a, const std::vector<Literal>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!same_literal(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Domain& a, const Domain& b) {
  if (!iequals(a.name, b.name)) return false;
  if (a.types.size() != b.types.size()) return false;
  for (size_t i = 0; i < a.types.size(); ++i)
    if (!iequals(a.types[i], b.types[i])) return false;
  if (a.predicates.size() != b.predicates.size()) return false;
  for (size_t i = 0; i < a.predicates.size(); ++i) {
    if (!iequals(a.predicates[i].name, b.predicates[i].name)) return false;
    if (!equal_typed(a.predicates[i].params, b.predicates[i].params)) return false;
  }
  if (a.actions.size() != b.actions.size()) return false;
  for (size_t i = 0; i < a.actions.size(); ++i) {
    const auto& x = a.actions[i];
    const auto& y = b.actions[i];
    if (!iequals(x.name, y.name) || x.cost != y.cost) return false;
    if (!equal_typed(x.params, y.params)) return false;
    if (!equal_literals(x.precondition, y.precondition)) return false;
    if (!equal_literals(x.effect, y.effect)) return false;
  }
  return true;
}

bool structurally_equal(const Problem& a, const Problem& b) {
  return iequals(a.name, b.name) && iequals(a.domain_name, b.domain_name) &&
         equal_typed(a.objects, b.objects) && equal_typed(a.implicit_objects, b.implicit_objects) &&
         equal_literals(a.init, b.init) && equal_literals(a.goal, b.goal);
}

std::optional<Literal> parse_literal(std::string_view text, std::string* error) {
  Diagnostics diags;
  try {
    Reader reader(text, diags);
    Sexp root = reader.read();
    // a literal is (not (p a b)) or (p a b)
    const Sexp* atom = &root;
    Literal l;
    if (root.is_list && !root.items.empty() && root.items[0].is_symbol("not")) {
      if (root.items.size() != 2 || !root.items[1].is_list) {
        if (error) *error = "expected (not (<predicate> args...))";
        return std::nullopt;
      }
      l.negated = true;
      atom = &root.items[1];
    }
    if (!atom->is_list || atom->items.empty() || atom->items[0].is_list) {
      if (error) *error = "expected (<predicate> args...)";
      return std::nullopt;
    }
    l.predicate = atom->items[0].text;
    for (size_t i = 1; i < atom->items.size(); ++i) {
      if (atom->items[i].is_list) {
        if (error) *error = "nested lists not allowed in literal";
        return std::nullopt;
      }
      l.args.push_back(atom->items[i].text);
    }
    return l;
  } catch (const ParseAbort&) {
    if (error) *error = diags.empty() ? "parse error" : diags.front().message;
    return std::nullopt;
  }
}

std::vector<std::string> tokenize_for_comparison(std::string_view text) {
  std::vector<std::string> out;
  Lexer lex{text};
  for (Token t = lex.next(); t.kind != Token::Kind::End; t = lex.next()) out.push_back(t.text);
  return out;
}

}  // namespace mrplan
