#pragma once

// Rule-based UMR -> AMR graph conversion.
//
// Passes, in order: canonicalize :argN capitalization, fold person/number
// features into pronoun concepts, drop removed roles and :wiki (reporting or
// rejecting any subtree that becomes unreachable), then apply role and
// concept renames. Variable ids of retained nodes are never touched, so
// re-entrancies survive.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "umrkit/penman.hpp"
#include "umrkit/rules.hpp"

namespace umr {

class convert_error : public std::runtime_error {
 public:
  enum class Kind { DisconnectedAfterConversion };
  convert_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct ConversionReport {
  // Deleted triples by (case-folded) role, covering both edges and attributes.
  std::map<std::string, std::size_t> removed_role_counts;
  std::size_t wiki_removed = 0;
  std::size_t refer_attributes_removed = 0;
  // "from -> to" keyed counts; keys use the rule set's folded "from".
  std::map<std::string, std::size_t> renamed_role_counts;
  std::map<std::string, std::size_t> renamed_concept_counts;
  std::vector<std::pair<std::string, std::string>> pronoun_substitutions;  // (variable, pronoun)
  // Variables dropped because role removal left them unreachable.
  std::vector<std::string> dropped_subtrees;
  std::size_t dropped_instance_triples = 0;
  std::size_t dropped_edge_triples = 0;
  std::size_t dropped_attribute_triples = 0;

  // Total triples deleted; renames and pronoun substitutions are in-place and
  // do not change triple counts, so for any conversion
  //   |triples(input)| - |triples(output)| == deleted_triples().
  std::size_t deleted_triples() const {
    std::size_t n = wiki_removed + refer_attributes_removed + dropped_instance_triples +
                    dropped_edge_triples + dropped_attribute_triples;
    for (const auto& [role, count] : removed_role_counts) n += count;
    return n;
  }

  bool empty() const {
    return removed_role_counts.empty() && wiki_removed == 0 && refer_attributes_removed == 0 &&
           renamed_role_counts.empty() && renamed_concept_counts.empty() &&
           pronoun_substitutions.empty() && dropped_subtrees.empty();
  }
};

namespace detail {

// ":arg0" / ":Arg12-of" -> canonical ":ARG12-of"; anything else unchanged.
inline std::optional<std::string> canonical_arg_role(const std::string& role) {
  std::string low = fold(role);
  if (low.rfind(":arg", 0) != 0) return std::nullopt;
  std::size_t i = 4;
  std::size_t digits = 0;
  while (i < low.size() && std::isdigit(static_cast<unsigned char>(low[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return std::nullopt;
  bool inverse = false;
  if (i != low.size()) {
    if (low.substr(i) != "-of") return std::nullopt;
    inverse = true;
  }
  std::string canon = ":ARG" + low.substr(4, digits) + (inverse ? "-of" : "");
  if (canon == role) return std::nullopt;
  return canon;
}

inline bool is_refer_person_role(const std::string& folded) {
  return folded == ":refer-person" || folded == ":ref-person";
}

inline bool is_refer_number_role(const std::string& folded) {
  return folded == ":refer-number" || folded == ":ref-number";
}

}  // namespace detail

// Applies a rule set to one sentence-level graph. In strict mode, a role
// removal that disconnects part of the graph raises
// convert_error::DisconnectedAfterConversion; otherwise the orphaned subtree
// is dropped and listed in the report.
inline std::pair<SemGraph, ConversionReport> convert(const SemGraph& input,
                                                     const ConversionRuleSet& rules,
                                                     bool strict = false) {
  validate(input);
  rules.check();
  SemGraph g = input;
  ConversionReport report;

  // :argN capitalization is normalized up front so later role matching and
  // downstream triple comparisons see one spelling.
  for (auto& e : g.edges)
    if (auto canon = detail::canonical_arg_role(e.role)) {
      ++report.renamed_role_counts[detail::fold(e.role) + " -> " + *canon];
      e.role = *canon;
    }
  for (auto& a : g.attributes)
    if (auto canon = detail::canonical_arg_role(a.role)) {
      ++report.renamed_role_counts[detail::fold(a.role) + " -> " + *canon];
      a.role = *canon;
    }

  // Pronoun pass: person/number features disappear everywhere; "person"
  // instances that carried them become the policy pronoun.
  {
    std::map<std::string, std::string> person_value, number_value;
    std::vector<Attribute> kept;
    kept.reserve(g.attributes.size());
    for (const auto& a : g.attributes) {
      std::string folded = detail::fold(a.role);
      if (detail::is_refer_person_role(folded)) {
        person_value.emplace(a.source, a.value);
        ++report.refer_attributes_removed;
      } else if (detail::is_refer_number_role(folded)) {
        number_value.emplace(a.source, a.value);
        ++report.refer_attributes_removed;
      } else {
        kept.push_back(a);
      }
    }
    g.attributes = std::move(kept);
    for (auto& [var, conc] : g.instances) {
      if (conc != "person") continue;
      auto pit = person_value.find(var);
      auto nit = number_value.find(var);
      if (pit == person_value.end() && nit == number_value.end()) continue;
      Person person =
          pit == person_value.end() ? Person::Unspecified : parse_person(pit->second);
      Number number =
          nit == number_value.end() ? Number::Unspecified : parse_number(nit->second);
      conc = resolve_pronoun(person, number, rules.pronoun_policy);
      report.pronoun_substitutions.emplace_back(var, conc);
    }
  }

  // Removal pass: removed roles plus :wiki when stripping.
  {
    auto is_removed = [&](const std::string& role, bool& wiki) {
      std::string folded = detail::fold(role);
      if (rules.removed_roles.count(folded)) {
        wiki = false;
        return true;
      }
      if (rules.strip_wiki && folded == ":wiki") {
        wiki = true;
        return true;
      }
      return false;
    };

    std::vector<Attribute> kept_attrs;
    kept_attrs.reserve(g.attributes.size());
    for (const auto& a : g.attributes) {
      bool wiki = false;
      if (is_removed(a.role, wiki)) {
        if (wiki)
          ++report.wiki_removed;
        else
          ++report.removed_role_counts[detail::fold(a.role)];
      } else {
        kept_attrs.push_back(a);
      }
    }
    g.attributes = std::move(kept_attrs);

    std::vector<Edge> kept_edges;
    kept_edges.reserve(g.edges.size());
    for (const auto& e : g.edges) {
      bool wiki = false;
      if (is_removed(e.role, wiki)) {
        if (wiki)
          ++report.wiki_removed;
        else
          ++report.removed_role_counts[detail::fold(e.role)];
      } else {
        kept_edges.push_back(e);
      }
    }
    g.edges = std::move(kept_edges);

    // Edge removal may have unhooked whole subtrees.
    std::set<std::string> reachable{g.root};
    std::vector<std::string> frontier{g.root};
    while (!frontier.empty()) {
      std::string v = std::move(frontier.back());
      frontier.pop_back();
      for (const auto& e : g.edges)
        if (e.source == v && reachable.insert(e.target).second) frontier.push_back(e.target);
    }
    if (reachable.size() != g.instances.size()) {
      std::vector<std::string> orphaned;
      for (const auto& [v, c] : g.instances)
        if (!reachable.count(v)) orphaned.push_back(v);
      if (strict) {
        std::string names;
        for (const auto& v : orphaned) names += (names.empty() ? "" : ", ") + v;
        throw convert_error(convert_error::Kind::DisconnectedAfterConversion,
                            "role removal orphaned subtree(s): " + names);
      }
      std::set<std::string> dropped(orphaned.begin(), orphaned.end());
      std::vector<std::pair<std::string, std::string>> kept_instances;
      for (const auto& inst : g.instances)
        if (!dropped.count(inst.first)) kept_instances.push_back(inst);
      std::vector<Edge> surviving_edges;
      for (const auto& e : g.edges) {
        if (dropped.count(e.source) || dropped.count(e.target))
          ++report.dropped_edge_triples;
        else
          surviving_edges.push_back(e);
      }
      std::vector<Attribute> surviving_attrs;
      for (const auto& a : g.attributes) {
        if (dropped.count(a.source))
          ++report.dropped_attribute_triples;
        else
          surviving_attrs.push_back(a);
      }
      g.instances = std::move(kept_instances);
      g.edges = std::move(surviving_edges);
      g.attributes = std::move(surviving_attrs);
      report.dropped_subtrees = std::move(orphaned);
      report.dropped_instance_triples = report.dropped_subtrees.size();
    }
  }

  // Rename pass.
  for (auto& e : g.edges) {
    auto it = rules.role_renames.find(detail::fold(e.role));
    if (it != rules.role_renames.end() && e.role != it->second) {
      ++report.renamed_role_counts[it->first + " -> " + it->second];
      e.role = it->second;
    }
  }
  for (auto& a : g.attributes) {
    auto it = rules.role_renames.find(detail::fold(a.role));
    if (it != rules.role_renames.end() && a.role != it->second) {
      ++report.renamed_role_counts[it->first + " -> " + it->second];
      a.role = it->second;
    }
  }
  for (auto& [var, conc] : g.instances) {
    auto it = rules.concept_renames.find(conc);
    if (it != rules.concept_renames.end()) {
      ++report.renamed_concept_counts[it->first + " -> " + it->second];
      conc = it->second;
    }
  }

  validate(g);
  return {std::move(g), std::move(report)};
}

// Flat TSV rows: category, detail, count. Used by the CLI's --report output.
inline std::string report_tsv(const ConversionReport& r, const std::string& id = "") {
  std::string out;
  auto row = [&](const std::string& category, const std::string& detail, std::size_t count) {
    if (!id.empty()) out += id + "\t";
    out += category + "\t" + detail + "\t" + std::to_string(count) + "\n";
  };
  for (const auto& [role, n] : r.removed_role_counts) row("removed-role", role, n);
  if (r.wiki_removed) row("removed-role", ":wiki", r.wiki_removed);
  if (r.refer_attributes_removed)
    row("removed-refer-attribute", ":refer-*", r.refer_attributes_removed);
  for (const auto& [m, n] : r.renamed_role_counts) row("renamed-role", m, n);
  for (const auto& [m, n] : r.renamed_concept_counts) row("renamed-concept", m, n);
  for (const auto& [var, pron] : r.pronoun_substitutions)
    row("pronoun", var + " -> " + pron, 1);
  for (const auto& var : r.dropped_subtrees) row("dropped-subtree", var, 1);
  return out;
}

}  // namespace umr
