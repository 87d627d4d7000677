#pragma once

// UMR annotation file ingestion, document-level classification, corpus
// splitting, and corpus statistics.
//
// An annotation file is a sequence of sentence blocks separated by marker
// lines (runs of '#'). Each block carries a sentence line, a sentence-level
// graph section, and optional alignment / document-level sections. Section
// headers are configurable because the exact strings vary across releases.

#include <cstdint>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "umrkit/penman.hpp"

namespace umr {

struct AlignmentRecord {
  std::string variable;
  // 0-based inclusive token span; start < 0 means the null (absent) span.
  int start = -1;
  int end = -1;

  bool is_null() const { return start < 0; }
  friend bool operator==(const AlignmentRecord&, const AlignmentRecord&) = default;
};

struct DocTriple {
  std::string source;
  std::string relation;
  std::string target;
  friend bool operator==(const DocTriple&, const DocTriple&) = default;
};

struct UmrAnnotation {
  std::string sentence_id;
  std::string language;
  std::vector<std::string> tokens;
  SemGraph sentence_graph;
  std::vector<AlignmentRecord> alignments;
  std::vector<DocTriple> doc_triples;
};

class corpus_error : public std::runtime_error {
 public:
  enum class Kind {
    MissingSentenceGraph,
    UnrecognizedSectionHeader,
    GraphParseError,
    MalformedBlock,
    BadRatios,
    EmptyCorpus,
  };

  corpus_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct UmrParseConfig {
  // A line whose trimmed form starts with this marks a block boundary.
  std::string block_separator_prefix = "####";
  // Header strings are matched case-insensitively against the line after
  // leading '#' characters and whitespace are stripped, and without any
  // trailing ':'.
  std::vector<std::string> sentence_headers = {":: snt", "::snt"};
  std::vector<std::string> words_headers = {"words"};
  std::vector<std::string> graph_headers = {"sentence level graph"};
  std::vector<std::string> alignment_headers = {"alignment"};
  std::vector<std::string> doc_headers = {"document level annotation"};
  std::vector<std::string> meta_headers = {"meta-info", "sent_id"};
  // Recognized but carrying no structure we keep.
  std::vector<std::string> ignored_headers = {"index", "morphemes", "translation", "english",
                                              "sentence"};
  bool lenient = false;
  // Release files count alignment spans from 1 and use 0-0 for "unaligned".
  bool alignment_one_based = true;
};

struct UmrParseResult {
  std::vector<UmrAnnotation> annotations;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Strips leading '#' runs and whitespace; "# alignment:" -> "alignment:".
inline std::string strip_header_mark(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == '#' || std::isspace(static_cast<unsigned char>(line[i]))))
    ++i;
  return std::string(line.substr(i));
}

// Matches `stripped` against a header string; returns the remainder after the
// header (with any ':' directly following it consumed) or nullopt.
inline std::optional<std::string> match_header(const std::string& stripped,
                                               const std::string& header) {
  std::string low = lower(stripped);
  std::string want = lower(header);
  if (low.rfind(want, 0) != 0) return std::nullopt;
  std::size_t i = want.size();
  if (i < stripped.size() && stripped[i] == ':') ++i;
  while (i < stripped.size() && std::isspace(static_cast<unsigned char>(stripped[i]))) ++i;
  return stripped.substr(i);
}

inline std::optional<std::string> match_any(const std::string& stripped,
                                            const std::vector<std::string>& headers) {
  for (const auto& h : headers)
    if (auto rest = match_header(stripped, h)) return rest;
  return std::nullopt;
}

inline std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Pulls "sent_id = X" (or "sent_id: X") out of a metadata line.
inline std::optional<std::string> extract_sent_id(const std::string& line) {
  std::string low = lower(line);
  auto at = low.find("sent_id");
  if (at == std::string::npos) return std::nullopt;
  std::size_t i = at + 7;
  while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == '=' ||
                             line[i] == ':'))
    ++i;
  std::size_t j = i;
  while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
  if (j == i) return std::nullopt;
  return line.substr(i, j - i);
}

// Minimal s-expression reader for document-level sections.
struct SexpNode {
  bool is_list = false;
  std::string atom;
  std::vector<SexpNode> items;
};

inline std::vector<SexpNode> read_sexprs(std::string_view text) {
  std::vector<SexpNode> roots;
  std::vector<SexpNode*> stack;
  std::size_t i = 0;
  auto push_atom = [&](std::string a) {
    SexpNode n;
    n.atom = std::move(a);
    if (stack.empty())
      roots.push_back(std::move(n));
    else
      stack.back()->items.push_back(std::move(n));
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      SexpNode n;
      n.is_list = true;
      if (stack.empty()) {
        roots.push_back(std::move(n));
        stack.push_back(&roots.back());
      } else {
        stack.back()->items.push_back(std::move(n));
        stack.push_back(&stack.back()->items.back());
      }
      ++i;
    } else if (c == ')') {
      if (stack.empty())
        throw corpus_error(corpus_error::Kind::GraphParseError,
                           "unmatched ')' in document-level section");
      stack.pop_back();
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && text[j] != '(' && text[j] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[j])))
        ++j;
      push_atom(std::string(text.substr(i, j - i)));
      i = j;
    }
  }
  if (!stack.empty())
    throw corpus_error(corpus_error::Kind::GraphParseError,
                       "unbalanced '(' in document-level section");
  return roots;
}

inline void collect_doc_triples(const SexpNode& node, std::vector<DocTriple>& out) {
  if (!node.is_list) return;
  if (node.items.size() == 3 && !node.items[0].is_list && !node.items[1].is_list &&
      !node.items[2].is_list && !node.items[1].atom.empty() && node.items[1].atom[0] == ':') {
    out.push_back({node.items[0].atom, node.items[1].atom, node.items[2].atom});
    return;
  }
  for (const auto& item : node.items) collect_doc_triples(item, out);
}

}  // namespace detail

// Extracts (source, relation, target) triples from a document-level section,
// whether it is written as a PENMAN-style wrapper graph or as a plain triple
// list. A bare "(s / sentence)" placeholder normalizes to no triples.
inline std::vector<DocTriple> normalize_doc_triples(std::string_view text) {
  std::vector<DocTriple> out;
  if (text.find('(') == std::string_view::npos) {
    // Plain triple list: one "source :relation target" per line.
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto toks = detail::split_ws(line);
      if (toks.size() == 3 && toks[1][0] == ':') out.push_back({toks[0], toks[1], toks[2]});
    }
    return out;
  }
  for (const auto& root : detail::read_sexprs(text)) detail::collect_doc_triples(root, out);
  return out;
}

// Parses one UMR annotation file into per-sentence annotations, in file order.
// In strict mode the first malformed block throws; in lenient mode malformed
// blocks are skipped and reported in diagnostics.
inline UmrParseResult parse_umr_file(std::string_view text, const std::string& language,
                                     const UmrParseConfig& config = {}) {
  UmrParseResult result;

  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  // Cut the file into segments at separator lines.
  std::vector<std::vector<std::string>> segments(1);
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string trimmed = detail::trim(line);
      if (!config.block_separator_prefix.empty() &&
          trimmed.rfind(config.block_separator_prefix, 0) == 0) {
        if (!segments.back().empty()) segments.emplace_back();
      } else {
        segments.back().push_back(line);
      }
    }
  }

  enum class Section { Preamble, Graph, Alignment, Doc };
  int block_index = 0;
  for (const auto& lines : segments) {
    // A segment is an annotation block when it announces a sentence or a
    // sentence-level graph; anything else (file preamble) is passed over.
    bool qualifies = false;
    for (const auto& line : lines) {
      std::string stripped = detail::strip_header_mark(line);
      if (detail::match_any(stripped, config.sentence_headers) ||
          detail::match_any(stripped, config.graph_headers)) {
        qualifies = true;
        break;
      }
    }
    if (!qualifies) continue;
    ++block_index;

    try {
      UmrAnnotation ann;
      ann.language = language;
      std::string sentence_text;
      std::string graph_text, doc_text;
      std::vector<std::pair<std::string, int>> alignment_lines;
      std::map<std::string, std::string> meta;
      bool saw_graph_header = false;
      Section section = Section::Preamble;

      int lineno = 0;
      for (const auto& line : lines) {
        ++lineno;
        std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;

        bool is_marked = trimmed[0] == '#';
        std::string stripped = detail::strip_header_mark(line);

        if (auto rest = detail::match_any(stripped, config.sentence_headers);
            rest && is_marked) {
          sentence_text = *rest;
          continue;
        }
        if (auto rest = detail::match_any(stripped, config.graph_headers); rest && is_marked) {
          section = Section::Graph;
          saw_graph_header = true;
          continue;
        }
        if (auto rest = detail::match_any(stripped, config.alignment_headers);
            rest && is_marked) {
          section = Section::Alignment;
          continue;
        }
        if (auto rest = detail::match_any(stripped, config.doc_headers); rest && is_marked) {
          section = Section::Doc;
          continue;
        }
        if (auto rest = detail::match_any(stripped, config.words_headers)) {
          ann.tokens = detail::split_ws(*rest);
          continue;
        }
        if (is_marked) {
          if (detail::match_any(stripped, config.meta_headers)) {
            if (auto id = detail::extract_sent_id(stripped)) ann.sentence_id = *id;
            meta["meta"] = meta.count("meta") ? meta["meta"] + "\n" + stripped : stripped;
            continue;
          }
          if (detail::match_any(stripped, config.ignored_headers)) continue;
          std::string msg = "block " + std::to_string(block_index) + " line " +
                            std::to_string(lineno) + ": unrecognized section header '" + trimmed +
                            "'";
          if (!config.lenient)
            throw corpus_error(corpus_error::Kind::UnrecognizedSectionHeader, msg);
          result.diagnostics.push_back(msg);
          continue;
        }

        switch (section) {
          case Section::Graph:
            graph_text += line;
            graph_text += '\n';
            break;
          case Section::Doc:
            doc_text += line;
            doc_text += '\n';
            break;
          case Section::Alignment:
            alignment_lines.emplace_back(trimmed, lineno);
            break;
          case Section::Preamble:
            // Free text between the sentence line and the first section.
            break;
        }
      }

      if (!saw_graph_header || detail::trim(graph_text).empty())
        throw corpus_error(corpus_error::Kind::MissingSentenceGraph,
                           "block " + std::to_string(block_index) + ": no sentence-level graph");

      if (ann.sentence_id.empty()) ann.sentence_id = "block-" + std::to_string(block_index);
      if (ann.tokens.empty()) ann.tokens = detail::split_ws(sentence_text);

      try {
        ann.sentence_graph = parse_penman(graph_text);
      } catch (const parse_error& e) {
        throw corpus_error(corpus_error::Kind::GraphParseError,
                           "block " + std::to_string(block_index) + " ('" + ann.sentence_id +
                               "'): " + e.what());
      }
      if (!sentence_text.empty()) ann.sentence_graph.metadata["snt"] = sentence_text;
      for (const auto& [k, v] : meta) ann.sentence_graph.metadata[k] = v;

      for (const auto& [aline, alineno] : alignment_lines) {
        auto colon = aline.find(':');
        std::string msg = "block " + std::to_string(block_index) + " alignment line " +
                          std::to_string(alineno) + ": '" + aline + "'";
        if (colon == std::string::npos) {
          if (!config.lenient)
            throw corpus_error(corpus_error::Kind::MalformedBlock, msg + " has no variable");
          result.diagnostics.push_back(msg + " has no variable (skipped)");
          continue;
        }
        AlignmentRecord rec;
        rec.variable = detail::trim(aline.substr(0, colon));
        std::string span = detail::trim(aline.substr(colon + 1));
        long a = 0, b = 0;
        char dash = 0;
        std::istringstream ss(span);
        if (!(ss >> a >> dash >> b) || dash != '-') {
          if (!config.lenient)
            throw corpus_error(corpus_error::Kind::MalformedBlock, msg + " has a malformed span");
          result.diagnostics.push_back(msg + " has a malformed span (kept as null)");
          ann.alignments.push_back(rec);
          continue;
        }
        if (config.alignment_one_based) {
          if (a == 0 && b == 0) {
            // release convention for "unaligned"
          } else {
            rec.start = static_cast<int>(a - 1);
            rec.end = static_cast<int>(b - 1);
          }
        } else {
          rec.start = static_cast<int>(a);
          rec.end = static_cast<int>(b);
        }
        if (!rec.is_null() &&
            (rec.start > rec.end || rec.end >= static_cast<int>(ann.tokens.size()))) {
          std::string bound = msg + " span out of token bounds";
          if (!config.lenient) throw corpus_error(corpus_error::Kind::MalformedBlock, bound);
          result.diagnostics.push_back(bound + " (span nulled)");
          rec.start = rec.end = -1;
        }
        if (!ann.sentence_graph.has_variable(rec.variable))
          result.diagnostics.push_back("block " + std::to_string(block_index) + " ('" +
                                       ann.sentence_id + "'): alignment variable '" +
                                       rec.variable + "' not in sentence graph");
        ann.alignments.push_back(rec);
      }

      if (!detail::trim(doc_text).empty()) ann.doc_triples = normalize_doc_triples(doc_text);

      result.annotations.push_back(std::move(ann));
    } catch (const corpus_error& e) {
      if (!config.lenient) throw;
      result.diagnostics.push_back(std::string(e.what()) + " (block skipped)");
    }
  }
  return result;
}

// The document-level counting rule: an annotation is document-level only if
// it carries alignment records and document triples beyond the bare
// "(s / sentence)" placeholder (which normalizes to no triples).
inline bool is_document_level(const UmrAnnotation& a) {
  return !a.alignments.empty() && !a.doc_triples.empty();
}

struct SplitRatios {
  double train = 0.7;
  double dev = 0.1;
  double test = 0.2;
};

struct CorpusSplit {
  struct Partition {
    std::vector<UmrAnnotation> train, dev, test;
  };
  std::map<std::string, Partition> by_language;
  SplitRatios ratios;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// std::shuffle is implementation-defined; explicit Fisher-Yates keeps split
// membership identical across standard libraries.
inline void deterministic_shuffle(std::vector<std::size_t>& idx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace detail

// Deterministic per-language train/dev/test split. Sizes follow
// dev = round(N*dev_ratio), test = round(N*test_ratio), train = remainder.
// Membership is seeded-random by default; `contiguous` keeps file order.
inline CorpusSplit split_corpus(const std::vector<UmrAnnotation>& corpus, SplitRatios ratios,
                                std::uint64_t seed, bool contiguous = false) {
  if (corpus.empty()) throw corpus_error(corpus_error::Kind::EmptyCorpus, "empty corpus");
  double sum = ratios.train + ratios.dev + ratios.test;
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 || std::abs(sum - 1.0) > 1e-9)
    throw corpus_error(corpus_error::Kind::BadRatios,
                       "ratios must be non-negative and sum to 1");

  CorpusSplit split;
  split.ratios = ratios;
  split.seed = seed;

  std::map<std::string, std::vector<std::size_t>> by_lang;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_lang[corpus[i].language].push_back(i);

  for (auto& [lang, indices] : by_lang) {
    const std::size_t n = indices.size();
    std::size_t dev = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.dev));
    std::size_t test =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.test));
    if (dev > n) dev = n;
    if (test > n - dev) test = n - dev;
    const std::size_t train = n - dev - test;

    std::vector<std::size_t> order = indices;
    if (!contiguous) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      detail::deterministic_shuffle(perm, seed ^ detail::fnv1a(lang));
      std::vector<std::size_t> shuffled(n);
      for (std::size_t i = 0; i < n; ++i) shuffled[i] = indices[perm[i]];
      order = std::move(shuffled);
    }

    auto& part = split.by_language[lang];
    auto emit = [&](std::size_t from, std::size_t count, std::vector<UmrAnnotation>& dst) {
      std::vector<std::size_t> member(order.begin() + from, order.begin() + from + count);
      std::sort(member.begin(), member.end());  // corpus order within a partition
      for (std::size_t i : member) dst.push_back(corpus[i]);
    };
    emit(0, train, part.train);
    emit(train, dev, part.dev);
    emit(train + dev, test, part.test);
  }
  return split;
}

struct ExcludeResult {
  std::vector<UmrAnnotation> remaining;
  std::size_t removed = 0;
  std::vector<std::string> not_found;
};

// Removes annotations whose sentence_id appears in `ids`; unknown ids are
// reported, not errors.
inline ExcludeResult exclude_ids(const std::vector<UmrAnnotation>& corpus,
                                 const std::vector<std::string>& ids) {
  std::set<std::string> wanted(ids.begin(), ids.end());
  std::set<std::string> seen;
  ExcludeResult result;
  for (const auto& a : corpus) {
    if (wanted.count(a.sentence_id)) {
      ++result.removed;
      seen.insert(a.sentence_id);
    } else {
      result.remaining.push_back(a);
    }
  }
  for (const auto& id : wanted)
    if (!seen.count(id)) result.not_found.push_back(id);
  return result;
}

struct LanguageCount {
  std::size_t total = 0;
  std::size_t document_level = 0;
};

inline std::map<std::string, LanguageCount> corpus_stats(
    const std::vector<UmrAnnotation>& corpus) {
  std::map<std::string, LanguageCount> stats;
  for (const auto& a : corpus) {
    auto& row = stats[a.language];
    ++row.total;
    if (is_document_level(a)) ++row.document_level;
  }
  return stats;
}

inline std::string stats_tsv(const std::map<std::string, LanguageCount>& stats) {
  std::string out = "language\ttotal\tdocument_level\n";
  for (const auto& [lang, row] : stats)
    out += lang + "\t" + std::to_string(row.total) + "\t" + std::to_string(row.document_level) +
           "\n";
  return out;
}

// Table-style view of a split: per-language totals with document-level
// counts in parentheses.
inline std::string split_stats_tsv(const CorpusSplit& split) {
  auto cell = [](const std::vector<UmrAnnotation>& part) {
    std::size_t doc = 0;
    for (const auto& a : part)
      if (is_document_level(a)) ++doc;
    return std::to_string(part.size()) + " (" + std::to_string(doc) + ")";
  };
  std::string out = "language\ttrain\tdev\ttest\n";
  for (const auto& [lang, part] : split.by_language)
    out += lang + "\t" + cell(part.train) + "\t" + cell(part.dev) + "\t" + cell(part.test) + "\n";
  return out;
}

inline std::string partition_id_lines(const std::vector<UmrAnnotation>& part) {
  std::string out;
  for (const auto& a : part) {
    out += a.sentence_id;
    out += '\n';
  }
  return out;
}

}  // namespace umr
