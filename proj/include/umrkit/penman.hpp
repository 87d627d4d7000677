#pragma once

// Rooted directed labeled semantic graphs and their PENMAN text form.
//
// A graph is a set of variable instances ("v / concept"), relation edges
// between variables (":role"), and constant-valued attributes. Everything
// downstream (conversion, Smatch, corpus handling) consumes either the
// SemGraph structure or its canonical triple view.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace umr {

struct Edge {
  std::string source;
  std::string role;  // includes the leading ':'
  std::string target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Attribute {
  std::string source;
  std::string role;
  std::string value;  // stored verbatim: quoted strings keep their quotes

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct SemGraph {
  std::string root;
  // Instance list keeps definition order; graphs are small, lookups are linear.
  std::vector<std::pair<std::string, std::string>> instances;
  std::vector<Edge> edges;
  std::vector<Attribute> attributes;
  std::map<std::string, std::string> metadata;

  bool has_variable(std::string_view var) const {
    for (const auto& [v, c] : instances)
      if (v == var) return true;
    return false;
  }

  const std::string* concept_of(std::string_view var) const {
    for (const auto& [v, c] : instances)
      if (v == var) return &c;
    return nullptr;
  }

  friend bool operator==(const SemGraph&, const SemGraph&) = default;
};

enum class TripleKind { Instance, Relation, Attribute };

// The pseudo-role carried by instance triples and the synthetic root marker.
inline constexpr const char* kInstanceRole = "instance";
inline constexpr const char* kTopRole = "top";

struct Triple {
  TripleKind kind;
  std::string source;
  std::string role;
  std::string target;  // concept for instance triples, variable or constant otherwise

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

class parse_error : public std::runtime_error {
 public:
  enum class Kind {
    UnbalancedParens,
    DuplicateVariableDefinition,
    DanglingVariableReference,
    EmptyGraph,
    BadSyntax,
  };

  parse_error(Kind kind, const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

class invalid_graph : public std::runtime_error {
 public:
  explicit invalid_graph(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

struct Token {
  enum class Type { LParen, RParen, Slash, Role, Symbol, Quoted, Number };
  Type type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  // Consumes leading "# ..." comment lines, returning them (without newline).
  std::vector<std::string> take_comment_lines() {
    std::vector<std::string> lines;
    for (;;) {
      skip_blank();
      if (pos_ >= text_.size() || text_[pos_] != '#') break;
      std::size_t eol = text_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = text_.size();
      lines.emplace_back(text_.substr(pos_, eol - pos_));
      advance_to(eol);
    }
    return lines;
  }

  std::optional<Token> next() {
    skip_blank();
    if (pos_ >= text_.size()) return std::nullopt;
    char c = text_[pos_];
    int line = line_, col = col_;
    if (c == '(') {
      advance();
      return Token{Token::Type::LParen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return Token{Token::Type::RParen, ")", line, col};
    }
    if (c == '/') {
      advance();
      return Token{Token::Type::Slash, "/", line, col};
    }
    if (c == '"') {
      std::string raw;
      raw += c;
      advance();
      bool closed = false;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        raw += d;
        advance();
        if (d == '\\' && pos_ < text_.size()) {
          raw += text_[pos_];
          advance();
          continue;
        }
        if (d == '"') {
          closed = true;
          break;
        }
      }
      if (!closed)
        throw parse_error(parse_error::Kind::BadSyntax, "unterminated string literal", line, col);
      return Token{Token::Type::Quoted, raw, line, col};
    }
    std::string word;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) {
      word += text_[pos_];
      advance();
    }
    if (word.empty())
      throw parse_error(parse_error::Kind::BadSyntax, "unexpected character", line, col);
    if (word[0] == ':') {
      if (word.size() == 1)
        throw parse_error(parse_error::Kind::BadSyntax, "role without a name", line, col);
      return Token{Token::Type::Role, word, line, col};
    }
    if (looks_numeric(word)) return Token{Token::Type::Number, word, line, col};
    return Token{Token::Type::Symbol, word, line, col};
  }

  int line() const { return line_; }
  int column() const { return col_; }

  static bool looks_numeric(std::string_view w) {
    std::size_t i = 0;
    if (w[0] == '+' || w[0] == '-') i = 1;
    if (i >= w.size()) return false;
    bool digit = false;
    for (; i < w.size(); ++i) {
      if (std::isdigit(static_cast<unsigned char>(w[i])))
        digit = true;
      else if (w[i] != '.' && w[i] != ',')
        return false;
    }
    return digit;
  }

 private:
  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == '/' || c == '"' ||
           std::isspace(static_cast<unsigned char>(c));
  }

  void skip_blank() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance_to(std::size_t target) {
    while (pos_ < target && pos_ < text_.size()) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// "# ::snt He ran" -> {snt: "He ran"}; "# meta :: a = b" style lines keep the
// text after "::" under the first word; plain comments accumulate under "comment".
inline void absorb_comment_line(std::string_view line, std::map<std::string, std::string>& meta) {
  std::string_view rest = line;
  rest.remove_prefix(1);  // '#'
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
    rest.remove_prefix(1);
  auto mark = rest.find("::");
  if (mark != std::string_view::npos) {
    std::string_view tail = rest.substr(mark + 2);
    while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.front())))
      tail.remove_prefix(1);
    auto sp = tail.find_first_of(" \t");
    std::string key(tail.substr(0, sp));
    std::string value;
    if (sp != std::string_view::npos) {
      std::string_view v = tail.substr(sp + 1);
      while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
      value.assign(v);
    }
    if (!key.empty()) {
      meta[key] = value;
      return;
    }
  }
  std::string text(rest);
  auto [it, inserted] = meta.try_emplace("comment", text);
  if (!inserted) {
    it->second += '\n';
    it->second += text;
  }
}

}  // namespace detail

namespace detail {

// A token the serializer can write back without changing its reading:
// either a quoted string, or a bare symbol free of structural characters.
inline bool token_well_formed(std::string_view t) {
  if (t.empty()) return false;
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return true;
  for (char c : t)
    if (c == '(' || c == ')' || c == '"' || std::isspace(static_cast<unsigned char>(c)))
      return false;
  return true;
}

inline bool variable_well_formed(std::string_view v) {
  if (!token_well_formed(v) || v.front() == '"' || v.front() == ':') return false;
  if (v.find('/') != std::string_view::npos) return false;
  return !Lexer::looks_numeric(v);
}

}  // namespace detail

// Checks the structural invariants; throws invalid_graph on the first
// violation. Validity also guarantees faithful serialization: variable ids
// must read back as variables (no role/number/quote shapes), tokens carry no
// structural characters unless quoted, and no attribute constant collides
// with a variable id (the parser would read it back as an edge).
inline void validate(const SemGraph& g) {
  if (g.instances.empty()) throw invalid_graph("graph has no instances");
  auto quoted = [](const std::string& t) {
    return t.size() >= 2 && t.front() == '"' && t.back() == '"';
  };
  auto role_ok = [](const std::string& r) {
    return r.size() >= 2 && r[0] == ':' && detail::token_well_formed(r) &&
           r.find('/') == std::string::npos;
  };
  std::set<std::string> vars;
  for (const auto& [v, c] : g.instances) {
    if (!detail::variable_well_formed(v)) throw invalid_graph("malformed variable id '" + v + "'");
    if (!quoted(c) && (!detail::token_well_formed(c) || c[0] == ':' ||
                       c.find('/') != std::string::npos))
      throw invalid_graph("malformed concept '" + c + "' for variable '" + v + "'");
    if (!vars.insert(v).second) throw invalid_graph("duplicate instance for variable '" + v + "'");
  }
  if (!vars.count(g.root)) throw invalid_graph("root '" + g.root + "' has no instance");
  for (const auto& e : g.edges) {
    if (!vars.count(e.source)) throw invalid_graph("edge source '" + e.source + "' undefined");
    if (!vars.count(e.target)) throw invalid_graph("edge target '" + e.target + "' undefined");
    if (!role_ok(e.role)) throw invalid_graph("malformed edge role '" + e.role + "'");
  }
  for (const auto& a : g.attributes) {
    if (!vars.count(a.source)) throw invalid_graph("attribute source '" + a.source + "' undefined");
    if (!role_ok(a.role)) throw invalid_graph("malformed attribute role '" + a.role + "'");
    if (!quoted(a.value) && (!detail::token_well_formed(a.value) || a.value[0] == ':' ||
                             a.value.find('/') != std::string::npos))
      throw invalid_graph("malformed attribute value '" + a.value + "'");
    if (vars.count(a.value))
      throw invalid_graph("attribute value '" + a.value +
                          "' collides with a variable id and would read back as an edge");
  }
  // Every variable must be reachable from the root along edge direction.
  std::set<std::string> seen{g.root};
  std::vector<std::string> frontier{g.root};
  while (!frontier.empty()) {
    std::string v = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& e : g.edges)
      if (e.source == v && seen.insert(e.target).second) frontier.push_back(e.target);
  }
  for (const auto& [v, c] : g.instances)
    if (!seen.count(v)) throw invalid_graph("variable '" + v + "' unreachable from root");
}

// Parses one PENMAN expression, optionally preceded by "# ..." metadata lines.
//
// A bare token in target position becomes a relation edge iff it names a
// variable defined anywhere in the same graph; otherwise it is kept as a
// constant attribute value. Quoted strings and numbers are always constants.
inline SemGraph parse_penman(std::string_view text) {
  detail::Lexer lex(text);
  SemGraph g;
  for (const auto& line : lex.take_comment_lines()) detail::absorb_comment_line(line, g.metadata);

  struct PendingTarget {
    std::size_t edge_slot;  // index into ordered children
    std::string source;
    std::string role;
    std::string token;
    bool force_constant;
    int line, column;
  };
  // Children are collected in textual order, then split into edges/attributes
  // once variable definitions are known.
  struct Child {
    bool resolved_edge = false;
    Edge edge;
    Attribute attr;
    bool is_attr = false;
  };
  std::vector<Child> children;
  std::vector<PendingTarget> pending;

  auto first = lex.next();
  if (!first)
    throw parse_error(parse_error::Kind::EmptyGraph, "no graph in input", lex.line(), lex.column());
  if (first->type != detail::Token::Type::LParen)
    throw parse_error(parse_error::Kind::BadSyntax, "expected '(' to open graph", first->line,
                      first->column);

  struct Frame {
    std::string var;
  };
  std::vector<Frame> stack;
  std::set<std::string> defined;
  // Parenthesised mentions "(x)" with no concept; dangling unless x is defined elsewhere.
  std::vector<std::pair<std::string, std::pair<int, int>>> bare_mentions;

  enum class State { NodeVar, AfterVar, Concept, ChildRole, ChildTarget };
  State state = State::NodeVar;
  std::string pending_role;
  int depth = 1;

  auto define_var = [&](const std::string& var, const std::string& conc, int line, int col) {
    if (!defined.insert(var).second)
      throw parse_error(parse_error::Kind::DuplicateVariableDefinition,
                        "variable '" + var + "' defined twice", line, col);
    g.instances.emplace_back(var, conc);
    if (g.root.empty()) g.root = var;
  };

  std::string current_var;
  int current_var_line = 0, current_var_col = 0;

  while (depth > 0) {
    auto tok = lex.next();
    if (!tok)
      throw parse_error(parse_error::Kind::UnbalancedParens, "unexpected end of input", lex.line(),
                        lex.column());
    using TT = detail::Token::Type;
    switch (state) {
      case State::NodeVar:
        if (tok->type == TT::RParen && g.instances.empty())
          throw parse_error(parse_error::Kind::EmptyGraph, "empty graph '()'", tok->line,
                            tok->column);
        if (tok->type != TT::Symbol)
          throw parse_error(parse_error::Kind::BadSyntax, "expected variable after '('", tok->line,
                            tok->column);
        current_var = tok->text;
        current_var_line = tok->line;
        current_var_col = tok->column;
        state = State::AfterVar;
        break;
      case State::AfterVar:
        if (tok->type == TT::Slash) {
          state = State::Concept;
        } else if (tok->type == TT::RParen) {
          // "(x)": re-entrant mention, valid only if x is defined elsewhere
          bare_mentions.emplace_back(current_var,
                                     std::make_pair(current_var_line, current_var_col));
          if (!pending_role.empty()) {
            pending.push_back({children.size(), stack.back().var, pending_role, current_var, false,
                               current_var_line, current_var_col});
            children.emplace_back();
            pending_role.clear();
          } else if (stack.empty()) {
            throw parse_error(parse_error::Kind::DanglingVariableReference,
                              "top-level variable mention without definition", current_var_line,
                              current_var_col);
          }
          --depth;
          state = State::ChildRole;
        } else {
          throw parse_error(parse_error::Kind::BadSyntax, "expected '/' or ')' after variable",
                            tok->line, tok->column);
        }
        break;
      case State::Concept: {
        if (tok->type != TT::Symbol && tok->type != TT::Quoted && tok->type != TT::Number)
          throw parse_error(parse_error::Kind::BadSyntax, "expected concept after '/'", tok->line,
                            tok->column);
        define_var(current_var, tok->text, current_var_line, current_var_col);
        if (!pending_role.empty()) {
          Child c;
          c.resolved_edge = true;
          c.edge = Edge{stack.back().var, pending_role, current_var};
          children.push_back(std::move(c));
          pending_role.clear();
        }
        stack.push_back({current_var});
        state = State::ChildRole;
        break;
      }
      case State::ChildRole:
        if (tok->type == TT::Role) {
          pending_role = tok->text;
          state = State::ChildTarget;
        } else if (tok->type == TT::RParen) {
          if (stack.empty())
            throw parse_error(parse_error::Kind::UnbalancedParens, "unmatched ')'", tok->line,
                              tok->column);
          stack.pop_back();
          --depth;
        } else {
          throw parse_error(parse_error::Kind::BadSyntax, "expected role or ')'", tok->line,
                            tok->column);
        }
        break;
      case State::ChildTarget:
        if (tok->type == TT::LParen) {
          ++depth;
          state = State::NodeVar;
          // pending_role is consumed when the node's variable is defined,
          // or when "(x)" closes as a bare mention
          continue;
        }
        if (tok->type == TT::Symbol) {
          pending.push_back({children.size(), stack.back().var, pending_role, tok->text, false,
                             tok->line, tok->column});
          children.emplace_back();
        } else if (tok->type == TT::Quoted || tok->type == TT::Number) {
          pending.push_back({children.size(), stack.back().var, pending_role, tok->text, true,
                             tok->line, tok->column});
          children.emplace_back();
        } else {
          throw parse_error(parse_error::Kind::BadSyntax, "expected value after role", tok->line,
                            tok->column);
        }
        pending_role.clear();
        state = State::ChildRole;
        break;
    }
    if (depth > 0 && state == State::ChildRole && stack.empty())
      throw parse_error(parse_error::Kind::UnbalancedParens, "unmatched ')'", lex.line(),
                        lex.column());
  }

  if (auto extra = lex.next())
    throw parse_error(parse_error::Kind::UnbalancedParens, "unexpected content after graph",
                      extra->line, extra->column);
  if (g.instances.empty())
    throw parse_error(parse_error::Kind::EmptyGraph, "graph defines no instances", 1, 1);

  for (const auto& [var, pos] : bare_mentions)
    if (!defined.count(var))
      throw parse_error(parse_error::Kind::DanglingVariableReference,
                        "variable '" + var + "' is referenced but never defined", pos.first,
                        pos.second);

  // Whole-graph resolution of bare targets.
  for (const auto& p : pending) {
    Child& slot = children[p.edge_slot];
    if (!p.force_constant && defined.count(p.token)) {
      slot.resolved_edge = true;
      slot.edge = Edge{p.source, p.role, p.token};
    } else {
      slot.is_attr = true;
      slot.attr = Attribute{p.source, p.role, p.token};
    }
  }
  for (const auto& c : children) {
    if (c.resolved_edge)
      g.edges.push_back(c.edge);
    else if (c.is_attr)
      g.attributes.push_back(c.attr);
  }
  try {
    validate(g);
  } catch (const invalid_graph& e) {
    // Parser output should always validate; report anything that slips
    // through as a positioned syntax error rather than invalid_graph.
    throw parse_error(parse_error::Kind::BadSyntax, e.what(), 1, 1);
  }
  return g;
}

// Serializes a graph back to PENMAN text. Each variable's concept appears at
// its first mention; later mentions are bare variables. With indent == 0 the
// output is a single line; otherwise children start on new lines indented by
// `indent` spaces per depth level. Metadata lines are emitted first.
inline std::string serialize_penman(const SemGraph& g, int indent = 4) {
  validate(g);
  std::string out;
  for (const auto& [key, value] : g.metadata) {
    if (key == "comment") {
      std::istringstream lines(value);
      std::string line;
      while (std::getline(lines, line)) out += "# " + line + "\n";
    } else {
      out += "# ::" + key + (value.empty() ? "" : " " + value) + "\n";
    }
  }
  std::set<std::string> emitted;

  auto pad = [&](int depth) {
    if (indent == 0) {
      out += ' ';
    } else {
      out += '\n';
      out.append(static_cast<std::size_t>(indent) * depth, ' ');
    }
  };

  auto emit = [&](auto&& self, const std::string& var, int depth) -> void {
    emitted.insert(var);
    out += "(" + var + " / " + *g.concept_of(var);
    for (const auto& e : g.edges) {
      if (e.source != var) continue;
      pad(depth + 1);
      out += e.role + " ";
      if (emitted.count(e.target))
        out += e.target;
      else
        self(self, e.target, depth + 1);
    }
    for (const auto& a : g.attributes) {
      if (a.source != var) continue;
      pad(depth + 1);
      out += a.role + " " + a.value;
    }
    out += ")";
  };
  emit(emit, g.root, 0);
  return out;
}

// Canonical triple view: instance triples, relation triples, attribute
// triples, plus a synthetic top marker carrying the root's concept (so two
// graphs only match at the top when their roots map and agree on concept).
inline std::vector<Triple> to_triples(const SemGraph& g) {
  std::vector<Triple> out;
  out.reserve(g.instances.size() + g.edges.size() + g.attributes.size() + 1);
  for (const auto& [v, c] : g.instances)
    out.push_back({TripleKind::Instance, v, kInstanceRole, c});
  for (const auto& e : g.edges) out.push_back({TripleKind::Relation, e.source, e.role, e.target});
  for (const auto& a : g.attributes)
    out.push_back({TripleKind::Attribute, a.source, a.role, a.value});
  out.push_back({TripleKind::Attribute, g.root, kTopRole, *g.concept_of(g.root)});
  return out;
}

inline std::vector<Triple> sorted_triples(const SemGraph& g) {
  auto t = to_triples(g);
  std::sort(t.begin(), t.end());
  return t;
}

inline bool same_triples(const SemGraph& a, const SemGraph& b) {
  return sorted_triples(a) == sorted_triples(b);
}

struct BlockParseResult {
  std::vector<SemGraph> graphs;
  std::vector<std::string> diagnostics;  // lenient mode only
};

// Batched graph files: PENMAN blocks separated by blank lines, each block
// optionally headed by "# ..." metadata lines. In strict mode the first bad
// block throws; in lenient mode it is reported and skipped.
inline BlockParseResult parse_penman_blocks(std::string_view text, bool lenient = false) {
  BlockParseResult result;
  std::vector<std::pair<std::string, int>> blocks;  // text, starting line
  std::string current;
  int line_no = 0, block_start = 1;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (blank) {
      if (!current.empty()) blocks.emplace_back(std::move(current), block_start);
      current.clear();
    } else {
      if (current.empty()) block_start = line_no;
      current += line;
      current += '\n';
    }
  }
  if (!current.empty()) blocks.emplace_back(std::move(current), block_start);

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    try {
      result.graphs.push_back(parse_penman(blocks[i].first));
    } catch (const parse_error& e) {
      std::string msg = "block " + std::to_string(i + 1) + " (starting line " +
                        std::to_string(blocks[i].second) + "): " + e.what();
      if (!lenient) throw parse_error(e.kind(), msg, e.line(), e.column());
      result.diagnostics.push_back(msg);
    }
  }
  return result;
}

inline std::string serialize_penman_blocks(const std::vector<SemGraph>& graphs, int indent = 4) {
  std::string out;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (i) out += "\n";
    out += serialize_penman(graphs[i], indent);
    out += "\n";
  }
  return out;
}

}  // namespace umr
