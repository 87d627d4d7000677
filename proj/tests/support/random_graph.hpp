#pragma once

// Seeded random SemGraph generator for round-trip and Smatch properties.
// Graphs are built as a random spanning tree from the root plus extra
// re-entrant edges, so every variable is reachable by construction.

#include <random>
#include <string>
#include <vector>

#include "umrkit/penman.hpp"

namespace testsupport {

struct RandomGraphConfig {
  std::size_t min_vars = 1;
  std::size_t max_vars = 10;
  std::size_t max_extra_edges = 3;
  std::size_t max_attributes = 4;
  std::string var_prefix = "v";
};

inline const std::vector<std::string>& concept_pool() {
  static const std::vector<std::string> pool = {
      "search-01", "person", "clue",   "say-01",  "pleasure", "thing", "go-02",
      "want-01",   "city",   "have-03", "tree",    "basket",  "pear",  "apron",
      "see-01",    "drop-01"};
  return pool;
}

// Includes roles the converter removes (:aspect, :quot) so conversion
// properties exercise subtree dropping, not just attribute deletion.
inline const std::vector<std::string>& role_pool() {
  static const std::vector<std::string> pool = {
      ":ARG0", ":ARG1", ":ARG2", ":ARG3",   ":mod",   ":time",
      ":op1",  ":op2",  ":location", ":ARG0-of", ":manner", ":poss",
      ":aspect", ":quot"};
  return pool;
}

inline const std::vector<std::string>& attr_role_pool() {
  static const std::vector<std::string> pool = {":polarity", ":quant", ":mode", ":li",
                                                ":refer-number", ":aspect", ":wiki",
                                                ":modstr"};
  return pool;
}

inline const std::vector<std::string>& attr_value_pool() {
  static const std::vector<std::string> pool = {"-",        "3rd",      "Singular", "42",
                                                "\"Rome\"", "imperative", "Activity", "2.5"};
  return pool;
}

template <typename Rng>
const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
  return pool[static_cast<std::size_t>(rng() % pool.size())];
}

template <typename Rng>
umr::SemGraph random_graph(Rng& rng, const RandomGraphConfig& config = {}) {
  umr::SemGraph g;
  std::size_t span = config.max_vars - config.min_vars + 1;
  std::size_t n = config.min_vars + static_cast<std::size_t>(rng() % span);

  for (std::size_t i = 0; i < n; ++i)
    g.instances.emplace_back(config.var_prefix + std::to_string(i), pick(concept_pool(), rng));
  g.root = g.instances.front().first;

  // Spanning tree: each non-root hangs off an earlier variable.
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t parent = static_cast<std::size_t>(rng() % i);
    g.edges.push_back({g.instances[parent].first, pick(role_pool(), rng),
                       g.instances[i].first});
  }
  // Re-entrant extras.
  std::size_t extra = static_cast<std::size_t>(rng() % (config.max_extra_edges + 1));
  for (std::size_t k = 0; k < extra && n > 0; ++k) {
    std::size_t s = static_cast<std::size_t>(rng() % n);
    std::size_t t = static_cast<std::size_t>(rng() % n);
    g.edges.push_back(
        {g.instances[s].first, pick(role_pool(), rng), g.instances[t].first});
  }
  std::size_t attrs = static_cast<std::size_t>(rng() % (config.max_attributes + 1));
  for (std::size_t k = 0; k < attrs && n > 0; ++k) {
    std::size_t s = static_cast<std::size_t>(rng() % n);
    g.attributes.push_back(
        {g.instances[s].first, pick(attr_role_pool(), rng), pick(attr_value_pool(), rng)});
  }
  return g;
}

// Uniform variable renaming, preserving structure.
inline umr::SemGraph rename_variables(const umr::SemGraph& g, const std::string& prefix) {
  umr::SemGraph out = g;
  std::map<std::string, std::string> renames;
  for (std::size_t i = 0; i < g.instances.size(); ++i)
    renames[g.instances[i].first] = prefix + std::to_string(i);
  out.root = renames.at(g.root);
  for (auto& [v, c] : out.instances) v = renames.at(v);
  for (auto& e : out.edges) {
    e.source = renames.at(e.source);
    e.target = renames.at(e.target);
  }
  for (auto& a : out.attributes) a.source = renames.at(a.source);
  return out;
}

// A structurally related second graph: rename everything, then nudge a few
// concepts/roles so scores land strictly between 0 and 1 most of the time.
template <typename Rng>
umr::SemGraph mutate_graph(const umr::SemGraph& g, Rng& rng, const std::string& prefix = "w") {
  umr::SemGraph out = rename_variables(g, prefix);
  if (!out.instances.empty() && rng() % 2 == 0)
    out.instances[static_cast<std::size_t>(rng() % out.instances.size())].second =
        pick(concept_pool(), rng);
  if (!out.edges.empty() && rng() % 2 == 0)
    out.edges[static_cast<std::size_t>(rng() % out.edges.size())].role = pick(role_pool(), rng);
  if (!out.attributes.empty() && rng() % 2 == 0)
    out.attributes.pop_back();
  return out;
}

}  // namespace testsupport
