#pragma once

// Smatch: F1 over matched triples, maximized over injective variable
// mappings between two graphs.
//
// Graphs where both sides have at most kExhaustiveLimit variables are scored
// by exhaustive enumeration (the optimum, not a heuristic); larger graphs use
// restart hill-climbing with a concept-match greedy first restart and a
// neighborhood of single remaps, swaps, and relation-guided paired moves.
// Roles are compared case-folded; concepts and constants compare
// case-sensitively.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "umrkit/penman.hpp"

namespace umr {

class smatch_error : public std::runtime_error {
 public:
  enum class Kind { EmptyPairList };
  smatch_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SmatchResult {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::map<std::string, std::string> mapping;  // g1 variable -> g2 variable
  std::size_t matched_triples = 0;
  std::size_t triples_g1 = 0;
  std::size_t triples_g2 = 0;
  int restarts_used = 0;
};

struct SmatchOptions {
  int restarts = 4;
  std::uint64_t seed = 0;
  // Skip the exhaustive small-graph path; used to validate the hill climber
  // against the enumeration oracle.
  bool force_hill_climbing = false;
};

inline constexpr std::size_t kExhaustiveLimit = 6;

namespace smatch_detail {

inline std::string fold_role(std::string_view role) {
  std::string out(role);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Both graphs of one scoring call, with triple labels interned to integers
// so evaluating a mapping is hash lookups over packed 64-bit keys instead of
// string comparisons. A scratch consumption table (reset via a touched list)
// keeps the count multiset-correct: identical triples on one side consume
// distinct identical triples on the other.
struct PairContext {
  std::vector<std::string> vars_a, vars_b;
  std::vector<std::string> concepts_a, concepts_b;  // for greedy seeding
  std::size_t triples_a = 0, triples_b = 0;

  struct AUnary {
    int v;
    std::uint64_t tag;
  };
  struct ARel {
    int source;
    int target;
    std::uint64_t role;
  };
  std::vector<AUnary> a_unary;
  std::vector<ARel> a_rel;
  std::vector<ARel> b_rel;  // kept for relation-guided moves

  std::unordered_map<std::uint64_t, int> b_index;  // packed key -> slot
  std::vector<int> b_count;

  mutable std::vector<int> consumed;
  mutable std::vector<int> touched;

  // Bit 63 flags unary keys; relation keys pack source/target into bits
  // 44.. and 24.. . Label ids stay below 2^24, variable counts below 2^19.
  static std::uint64_t unary_key(int w, std::uint64_t tag) {
    return (1ull << 63) | (static_cast<std::uint64_t>(w + 1) << 32) | tag;
  }
  static std::uint64_t rel_key(int s, int t, std::uint64_t role) {
    return (static_cast<std::uint64_t>(s + 1) << 44) |
           (static_cast<std::uint64_t>(t + 1) << 24) | role;
  }

  static PairContext build(const SemGraph& g1, const SemGraph& g2) {
    PairContext cx;
    std::map<std::string, std::uint64_t> labels;
    auto intern = [&](std::string label) {
      auto [it, inserted] = labels.try_emplace(std::move(label), labels.size());
      return it->second;
    };

    std::map<std::string, int> id_a, id_b;
    for (const auto& [v, c] : g1.instances) {
      id_a.emplace(v, static_cast<int>(cx.vars_a.size()));
      cx.vars_a.push_back(v);
      cx.concepts_a.push_back(c);
    }
    for (const auto& [v, c] : g2.instances) {
      id_b.emplace(v, static_cast<int>(cx.vars_b.size()));
      cx.vars_b.push_back(v);
      cx.concepts_b.push_back(c);
    }

    auto tag_of = [&](const Triple& t) {
      if (t.kind == TripleKind::Instance) return intern("i\x1f" + t.target);
      return intern("a\x1f" + fold_role(t.role) + "\x1f" + t.target);
    };
    auto triples1 = to_triples(g1);
    auto triples2 = to_triples(g2);
    cx.triples_a = triples1.size();
    cx.triples_b = triples2.size();
    for (const auto& t : triples1) {
      if (t.kind == TripleKind::Relation)
        cx.a_rel.push_back({id_a.at(t.source), id_a.at(t.target), intern(fold_role(t.role))});
      else
        cx.a_unary.push_back({id_a.at(t.source), tag_of(t)});
    }
    for (const auto& t : triples2) {
      std::uint64_t key;
      if (t.kind == TripleKind::Relation) {
        ARel rel{id_b.at(t.source), id_b.at(t.target), intern(fold_role(t.role))};
        cx.b_rel.push_back(rel);
        key = rel_key(rel.source, rel.target, rel.role);
      } else {
        key = unary_key(id_b.at(t.source), tag_of(t));
      }
      auto [it, inserted] = cx.b_index.try_emplace(key, static_cast<int>(cx.b_count.size()));
      if (inserted)
        cx.b_count.push_back(1);
      else
        ++cx.b_count[static_cast<std::size_t>(it->second)];
    }
    cx.consumed.assign(cx.b_count.size(), 0);
    cx.touched.reserve(cx.b_count.size());
    return cx;
  }

  std::size_t matched(const std::vector<int>& mapping) const {
    std::size_t total = 0;
    auto consume = [&](std::uint64_t key) {
      auto it = b_index.find(key);
      if (it == b_index.end()) return;
      int slot = it->second;
      if (consumed[static_cast<std::size_t>(slot)] <
          b_count[static_cast<std::size_t>(slot)]) {
        if (consumed[static_cast<std::size_t>(slot)]++ == 0) touched.push_back(slot);
        ++total;
      }
    };
    for (const auto& u : a_unary) {
      int w = mapping[static_cast<std::size_t>(u.v)];
      if (w >= 0) consume(unary_key(w, u.tag));
    }
    for (const auto& r : a_rel) {
      int s = mapping[static_cast<std::size_t>(r.source)];
      int t = mapping[static_cast<std::size_t>(r.target)];
      if (s >= 0 && t >= 0) consume(rel_key(s, t, r.role));
    }
    for (int slot : touched) consumed[static_cast<std::size_t>(slot)] = 0;
    touched.clear();
    return total;
  }
};

inline std::size_t exhaustive_best(const PairContext& cx, std::vector<int>& best_map) {
  const std::size_t n1 = cx.vars_a.size(), n2 = cx.vars_b.size();
  std::vector<int> mapping(n1, -1);
  std::vector<bool> used(n2, false);
  std::size_t best = 0;
  best_map.assign(n1, -1);

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n1) {
      std::size_t m = cx.matched(mapping);
      if (m > best) {
        best = m;
        best_map = mapping;
      }
      return;
    }
    for (std::size_t j = 0; j < n2; ++j) {
      if (used[j]) continue;
      used[j] = true;
      mapping[i] = static_cast<int>(j);
      self(self, i + 1);
      used[j] = false;
      mapping[i] = -1;
    }
    // Leaving i unmapped reaches assignments where a later variable takes
    // the target this one would have used.
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

struct ClimbOutcome {
  std::size_t matched = 0;
  std::vector<int> mapping;
  int restarts_used = 0;
};

inline ClimbOutcome hill_climb(const PairContext& cx, int restarts, std::uint64_t seed) {
  const std::size_t n1 = cx.vars_a.size(), n2 = cx.vars_b.size();
  ClimbOutcome out;
  out.mapping.assign(n1, -1);
  const auto& concepts_a = cx.concepts_a;
  const auto& concepts_b = cx.concepts_b;

  for (int restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart + 1));
    std::vector<int> mapping(n1, -1);
    std::vector<bool> used(n2, false);

    auto pick = [&](std::vector<int>& pool) -> int {
      int j = pool[static_cast<std::size_t>(rng() % pool.size())];
      used[static_cast<std::size_t>(j)] = true;
      return j;
    };

    if (restart == 0) {
      // Concept-match greedy seeding; leftovers get random targets.
      for (std::size_t i = 0; i < n1; ++i) {
        std::vector<int> candidates;
        for (std::size_t j = 0; j < n2; ++j)
          if (!used[j] && concepts_b[j] == concepts_a[i]) candidates.push_back(static_cast<int>(j));
        if (!candidates.empty()) mapping[i] = pick(candidates);
      }
    }
    for (std::size_t i = 0; i < n1; ++i) {
      if (mapping[i] >= 0) continue;
      std::vector<int> free;
      for (std::size_t j = 0; j < n2; ++j)
        if (!used[j]) free.push_back(static_cast<int>(j));
      if (free.empty()) break;
      mapping[i] = pick(free);
    }

    // All candidate successors of a mapping: single remaps (including
    // unmapping), pairwise swaps, and relation-guided paired moves. A
    // relation only matches when both endpoints map together, so the paired
    // moves let the climb cross single-move plateaus.
    auto neighbors = [&](const std::vector<int>& m) {
      std::vector<std::vector<int>> out_states;
      std::vector<bool> taken(n2, false);
      for (int j : m)
        if (j >= 0) taken[static_cast<std::size_t>(j)] = true;
      for (std::size_t i = 0; i < n1; ++i) {
        for (int j = -1; j < static_cast<int>(n2); ++j) {
          if (j == m[i]) continue;
          if (j >= 0 && taken[static_cast<std::size_t>(j)]) continue;
          std::vector<int> next = m;
          next[i] = j;
          out_states.push_back(std::move(next));
        }
      }
      for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t k = i + 1; k < n1; ++k) {
          if (m[i] == m[k]) continue;  // both -1
          std::vector<int> next = m;
          std::swap(next[i], next[k]);
          out_states.push_back(std::move(next));
        }
      }
      for (const auto& ra : cx.a_rel) {
        for (const auto& rb : cx.b_rel) {
          if (ra.role != rb.role) continue;
          std::vector<int> next = m;
          auto assign = [&](int from, int to) {
            for (std::size_t k = 0; k < n1; ++k)
              if (static_cast<int>(k) != from && next[k] == to)
                next[k] = next[static_cast<std::size_t>(from)];
            next[static_cast<std::size_t>(from)] = to;
          };
          assign(ra.source, rb.source);
          assign(ra.target, rb.target);
          if (next != m) out_states.push_back(std::move(next));
        }
      }
      return out_states;
    };

    auto state_key = [](const std::vector<int>& m) {
      std::uint64_t h = 1469598103934665603ull;
      for (int j : m) {
        h ^= static_cast<std::uint64_t>(j + 1);
        h *= 1099511628211ull;
      }
      return h;
    };

    std::size_t score = cx.matched(mapping);
    const std::size_t plateau_budget = std::max<std::size_t>(16, 2048 / (n1 + 1));
    for (;;) {
      std::size_t best_score = score;
      std::vector<int> best_mapping;
      for (auto& next : neighbors(mapping)) {
        std::size_t s = cx.matched(next);
        if (s > best_score) {
          best_score = s;
          best_mapping = std::move(next);
        }
      }
      if (best_score > score) {
        mapping = std::move(best_mapping);
        score = best_score;
        continue;
      }

      // No strict improvement: walk the equal-score plateau (bounded,
      // deterministic) looking for a state with an uphill neighbor.
      std::vector<std::vector<int>> frontier{mapping};
      std::set<std::uint64_t> visited{state_key(mapping)};
      bool improved = false;
      while (!frontier.empty() && !improved && visited.size() < plateau_budget) {
        std::vector<int> current = std::move(frontier.back());
        frontier.pop_back();
        for (auto& next : neighbors(current)) {
          std::size_t s = cx.matched(next);
          if (s > score) {
            mapping = std::move(next);
            score = s;
            improved = true;
            break;
          }
          if (s == score && visited.size() < plateau_budget &&
              visited.insert(state_key(next)).second)
            frontier.push_back(std::move(next));
        }
      }
      if (!improved) break;
    }

    if (score > out.matched || restart == 0) {
      out.matched = score;
      out.mapping = mapping;
    }
    out.restarts_used = restart + 1;
    if (out.matched == std::min(cx.triples_a, cx.triples_b)) break;  // cannot improve
  }
  return out;
}

}  // namespace smatch_detail

inline SmatchResult smatch(const SemGraph& g1, const SemGraph& g2, const SmatchOptions& opts = {}) {
  auto cx = smatch_detail::PairContext::build(g1, g2);

  SmatchResult result;
  result.triples_g1 = cx.triples_a;
  result.triples_g2 = cx.triples_b;

  std::vector<int> mapping;
  if (!opts.force_hill_climbing && cx.vars_a.size() <= kExhaustiveLimit &&
      cx.vars_b.size() <= kExhaustiveLimit) {
    result.matched_triples = smatch_detail::exhaustive_best(cx, mapping);
    result.restarts_used = 0;
  } else {
    auto climb = smatch_detail::hill_climb(cx, std::max(1, opts.restarts), opts.seed);
    result.matched_triples = climb.matched;
    mapping = std::move(climb.mapping);
    result.restarts_used = climb.restarts_used;
  }

  for (std::size_t i = 0; i < mapping.size(); ++i)
    if (mapping[i] >= 0)
      result.mapping[cx.vars_a[i]] = cx.vars_b[static_cast<std::size_t>(mapping[i])];

  double m = static_cast<double>(result.matched_triples);
  result.precision = result.triples_g1 ? m / static_cast<double>(result.triples_g1) : 0.0;
  result.recall = result.triples_g2 ? m / static_cast<double>(result.triples_g2) : 0.0;
  double pr = result.precision + result.recall;
  result.f1 = pr > 0 ? 2.0 * result.precision * result.recall / pr : 0.0;
  return result;
}

struct CorpusSmatchResult {
  double average_f1 = 0;  // macro by default, micro when requested
  bool micro = false;
  std::vector<SmatchResult> per_pair;
};

// Scores aligned graph pairs, optionally across several worker threads.
// Per-pair seeds derive from the pair index, so results do not depend on
// scheduling or pair order beyond the index itself.
inline CorpusSmatchResult corpus_smatch(const std::vector<std::pair<SemGraph, SemGraph>>& pairs,
                                        const SmatchOptions& opts = {}, bool micro = false,
                                        int jobs = 1) {
  if (pairs.empty())
    throw smatch_error(smatch_error::Kind::EmptyPairList, "no graph pairs to score");
  CorpusSmatchResult out;
  out.micro = micro;
  out.per_pair.resize(pairs.size());
  auto score_pair = [&](std::size_t i) {
    SmatchOptions per = opts;
    per.seed = opts.seed ^ (0xD1B54A32D192ED03ull * (static_cast<std::uint64_t>(i) + 1));
    out.per_pair[i] = smatch(pairs[i].first, pairs[i].second, per);
  };
  if (jobs <= 1 || pairs.size() <= 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) score_pair(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= pairs.size()) return;
          score_pair(i);
        }
      });
    for (auto& t : pool) t.join();
  }
  if (micro) {
    std::size_t m = 0, t1 = 0, t2 = 0;
    for (const auto& r : out.per_pair) {
      m += r.matched_triples;
      t1 += r.triples_g1;
      t2 += r.triples_g2;
    }
    double p = t1 ? static_cast<double>(m) / static_cast<double>(t1) : 0.0;
    double r = t2 ? static_cast<double>(m) / static_cast<double>(t2) : 0.0;
    out.average_f1 = (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
  } else {
    double sum = 0;
    for (const auto& r : out.per_pair) sum += r.f1;
    out.average_f1 = sum / static_cast<double>(out.per_pair.size());
  }
  return out;
}

}  // namespace umr
