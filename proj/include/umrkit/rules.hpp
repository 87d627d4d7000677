#pragma once

// Conversion rule sets: which roles to drop, how to rename roles and
// concepts, whether to strip :wiki, and how person/number features pick an
// English pronoun. Rule files are line-oriented with REMOVE / RENAME-ROLE /
// RENAME-CONCEPT / PRONOUN / OPTIONS sections (grammar in the README).

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace umr {

class rule_error : public std::runtime_error {
 public:
  enum class Kind { RuleConflict, RuleFileSyntax };
  rule_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Person { First, Second, Third, Unspecified };
enum class Number { Singular, Dual, Paucal, Plural, Unspecified };

inline constexpr std::array<Person, 4> kAllPersons = {Person::First, Person::Second, Person::Third,
                                                      Person::Unspecified};
inline constexpr std::array<Number, 5> kAllNumbers = {Number::Singular, Number::Dual,
                                                      Number::Paucal, Number::Plural,
                                                      Number::Unspecified};

namespace detail {

inline std::string fold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

// Feature values are matched case-insensitively; anything unrecognized is
// treated as unspecified rather than rejected.
inline Person parse_person(std::string_view raw) {
  std::string v = detail::fold(raw);
  if (v == "1st" || v == "first" || v == "1") return Person::First;
  if (v == "2nd" || v == "second" || v == "2") return Person::Second;
  if (v == "3rd" || v == "third" || v == "3") return Person::Third;
  return Person::Unspecified;
}

inline Number parse_number(std::string_view raw) {
  std::string v = detail::fold(raw);
  if (v == "singular") return Number::Singular;
  if (v == "dual") return Number::Dual;
  if (v == "paucal") return Number::Paucal;
  if (v == "plural") return Number::Plural;
  return Number::Unspecified;
}

inline std::string person_name(Person p) {
  switch (p) {
    case Person::First: return "1st";
    case Person::Second: return "2nd";
    case Person::Third: return "3rd";
    default: return "unspecified";
  }
}

inline std::string number_name(Number n) {
  switch (n) {
    case Number::Singular: return "singular";
    case Number::Dual: return "dual";
    case Number::Paucal: return "paucal";
    case Number::Plural: return "plural";
    default: return "unspecified";
  }
}

// Total (person, number) -> pronoun concept table.
class PronounPolicy {
 public:
  const std::string& pronoun(Person p, Number n) const {
    return table_[index(p)][index(n)];
  }

  void set(Person p, Number n, std::string pronoun) {
    table_[index(p)][index(n)] = std::move(pronoun);
  }

  bool total() const {
    for (const auto& row : table_)
      for (const auto& cell : row)
        if (cell.empty()) return false;
    return true;
  }

  // Third person is always gender-neutral "they"; bare first person defaults
  // to the singular "i"; dual and paucal pattern with plural.
  static PronounPolicy defaults() {
    PronounPolicy p;
    for (Person per : kAllPersons)
      for (Number num : kAllNumbers) p.set(per, num, "they");
    for (Number num : kAllNumbers) p.set(Person::Second, num, "you");
    for (Number num : kAllNumbers) p.set(Person::First, num, "we");
    p.set(Person::First, Number::Singular, "i");
    p.set(Person::First, Number::Unspecified, "i");
    return p;
  }

  friend bool operator==(const PronounPolicy&, const PronounPolicy&) = default;

 private:
  static std::size_t index(Person p) { return static_cast<std::size_t>(p); }
  static std::size_t index(Number n) { return static_cast<std::size_t>(n); }
  std::array<std::array<std::string, 5>, 4> table_{};
};

inline std::string resolve_pronoun(Person person, Number number, const PronounPolicy& policy) {
  return policy.pronoun(person, number);
}

struct ConversionRuleSet {
  // Role keys are stored case-folded; matching against graphs is
  // case-insensitive. Rename values keep the casing written in the rule file.
  std::set<std::string> removed_roles;
  std::map<std::string, std::string> role_renames;
  std::map<std::string, std::string> concept_renames;
  bool strip_wiki = true;
  PronounPolicy pronoun_policy = PronounPolicy::defaults();

  // Checks invariants: removal and rename keys disjoint, no identity entries,
  // no renames landing on a removed role or on :wiki while stripping.
  void check() const {
    for (const auto& [from, to] : role_renames) {
      if (removed_roles.count(from))
        throw rule_error(rule_error::Kind::RuleConflict,
                         "role '" + from + "' is both removed and renamed");
      if (from == detail::fold(to) && from == to)
        throw rule_error(rule_error::Kind::RuleConflict, "identity rename for role '" + from + "'");
      if (removed_roles.count(detail::fold(to)))
        throw rule_error(rule_error::Kind::RuleConflict,
                         "role '" + from + "' renames onto removed role '" + to + "'");
      if (strip_wiki && detail::fold(to) == ":wiki")
        throw rule_error(rule_error::Kind::RuleConflict,
                         "role '" + from + "' renames onto ':wiki' while :wiki is stripped");
    }
    if (strip_wiki && role_renames.count(":wiki"))
      throw rule_error(rule_error::Kind::RuleConflict,
                       "':wiki' cannot be renamed while it is stripped");
    for (const auto& [from, to] : concept_renames)
      if (from == to)
        throw rule_error(rule_error::Kind::RuleConflict,
                         "identity rename for concept '" + from + "'");
    if (!pronoun_policy.total())
      throw rule_error(rule_error::Kind::RuleConflict, "pronoun policy is not total");
  }
};

namespace detail {

// Follows rename chains to their final value so applying the map once is
// idempotent; cycles are conflicts.
template <typename Fold>
inline void resolve_chains(std::map<std::string, std::string>& renames, Fold&& fold_key,
                           const char* what) {
  for (auto& [from, to] : renames) {
    std::string cur = to;
    std::set<std::string> visited{from};
    bool first = true;
    for (;;) {
      std::string key = fold_key(cur);
      if (key == from) {
        if (first) break;  // case-normalizing fixpoint like :arg0 -> :ARG0
        throw rule_error(rule_error::Kind::RuleConflict,
                         std::string("rename cycle through ") + what + " '" + from + "'");
      }
      auto it = renames.find(key);
      if (it == renames.end()) break;
      if (!visited.insert(key).second)
        throw rule_error(rule_error::Kind::RuleConflict,
                         std::string("rename cycle through ") + what + " '" + key + "'");
      cur = it->second;
      first = false;
    }
    to = cur;
  }
}

}  // namespace detail

// Parses rule-file text. Sections: REMOVE (one role per line), RENAME-ROLE
// and RENAME-CONCEPT ("from -> to"), PRONOUN ("person number pronoun" with
// '*' wildcards, later lines override earlier ones), OPTIONS ("key = value").
inline ConversionRuleSet parse_rules(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  ConversionRuleSet rules;
  rules.strip_wiki = true;

  enum class Section { None, Remove, RenameRole, RenameConcept, Pronoun, Options };
  Section section = Section::None;
  bool saw_pronoun_section = false;
  PronounPolicy file_policy;  // starts empty; must end total if section present

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto syntax = [&](const std::string& msg) {
    return rule_error(rule_error::Kind::RuleFileSyntax,
                      "line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    {
      std::size_t a = line.find_first_not_of(" \t\r");
      std::size_t b = line.find_last_not_of(" \t\r");
      if (a != std::string::npos) trimmed = line.substr(a, b - a + 1);
    }
    if (trimmed.empty()) continue;

    std::string upper = trimmed;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "REMOVE") {
      section = Section::Remove;
      continue;
    }
    if (upper == "RENAME-ROLE") {
      section = Section::RenameRole;
      continue;
    }
    if (upper == "RENAME-CONCEPT") {
      section = Section::RenameConcept;
      continue;
    }
    if (upper == "PRONOUN") {
      section = Section::Pronoun;
      saw_pronoun_section = true;
      continue;
    }
    if (upper == "OPTIONS") {
      section = Section::Options;
      continue;
    }

    switch (section) {
      case Section::None:
        throw syntax("content before any section header: '" + trimmed + "'");
      case Section::Remove: {
        if (trimmed[0] != ':') throw syntax("removed role must start with ':'");
        rules.removed_roles.insert(detail::fold(trimmed));
        break;
      }
      case Section::RenameRole:
      case Section::RenameConcept: {
        auto arrow = trimmed.find("->");
        if (arrow == std::string::npos) throw syntax("expected 'from -> to'");
        std::string from = trimmed.substr(0, arrow);
        std::string to = trimmed.substr(arrow + 2);
        auto strip = [](std::string& s) {
          std::size_t a = s.find_first_not_of(" \t");
          std::size_t b = s.find_last_not_of(" \t");
          s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        strip(from);
        strip(to);
        if (from.empty() || to.empty()) throw syntax("expected 'from -> to'");
        if (section == Section::RenameRole) {
          if (from[0] != ':' || to[0] != ':') throw syntax("role names must start with ':'");
          if (from == to) throw syntax("identity rename for role '" + from + "'");
          auto [it, inserted] = rules.role_renames.emplace(detail::fold(from), to);
          if (!inserted && it->second != to)
            throw syntax("conflicting renames for role '" + from + "'");
        } else {
          if (from == to) throw syntax("identity rename for concept '" + from + "'");
          auto [it, inserted] = rules.concept_renames.emplace(from, to);
          if (!inserted && it->second != to)
            throw syntax("conflicting renames for concept '" + from + "'");
        }
        break;
      }
      case Section::Pronoun: {
        std::istringstream fields(trimmed);
        std::string person, number, pronoun;
        if (!(fields >> person >> number >> pronoun))
          throw syntax("expected 'person number pronoun'");
        std::string extra;
        if (fields >> extra) throw syntax("trailing content after pronoun entry");
        std::vector<Person> persons;
        std::vector<Number> numbers;
        std::string pl = detail::fold(person), nl = detail::fold(number);
        if (person == "*") {
          persons.assign(kAllPersons.begin(), kAllPersons.end());
        } else {
          if (pl != "1st" && pl != "2nd" && pl != "3rd" && pl != "unspecified")
            throw syntax("unknown person '" + person + "'");
          persons.push_back(parse_person(person));
        }
        if (number == "*") {
          numbers.assign(kAllNumbers.begin(), kAllNumbers.end());
        } else {
          if (nl != "singular" && nl != "dual" && nl != "paucal" && nl != "plural" &&
              nl != "unspecified")
            throw syntax("unknown number '" + number + "'");
          numbers.push_back(parse_number(number));
        }
        for (Person p : persons)
          for (Number n : numbers) file_policy.set(p, n, pronoun);
        break;
      }
      case Section::Options: {
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw syntax("expected 'key = value'");
        std::string key = detail::fold(trimmed.substr(0, eq));
        std::string value = detail::fold(trimmed.substr(eq + 1));
        auto strip = [](std::string& s) {
          std::size_t a = s.find_first_not_of(" \t");
          std::size_t b = s.find_last_not_of(" \t");
          s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        strip(key);
        strip(value);
        if (key == "strip-wiki" || key == "strip_wiki") {
          if (value == "true" || value == "yes" || value == "1")
            rules.strip_wiki = true;
          else if (value == "false" || value == "no" || value == "0")
            rules.strip_wiki = false;
          else
            throw syntax("strip-wiki must be true or false");
        } else {
          throw syntax("unknown option '" + key + "'");
        }
        break;
      }
    }
  }

  if (saw_pronoun_section) {
    if (!file_policy.total()) {
      std::string missing;
      for (Person p : kAllPersons)
        for (Number n : kAllNumbers)
          if (file_policy.pronoun(p, n).empty())
            missing += " (" + person_name(p) + ", " + number_name(n) + ")";
      throw rule_error(rule_error::Kind::RuleFileSyntax,
                       "PRONOUN section does not cover:" + missing);
    }
    rules.pronoun_policy = file_policy;
  }

  detail::resolve_chains(rules.role_renames, [](const std::string& s) { return detail::fold(s); },
                         "role");
  detail::resolve_chains(rules.concept_renames, [](const std::string& s) { return s; }, "concept");
  rules.check();
  return rules;
}

inline ConversionRuleSet load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw rule_error(rule_error::Kind::RuleFileSyntax, "cannot open rule file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str());
}

}  // namespace umr
