#pragma once

// Text evaluation: corpus BLEU with brevity penalty and add-one smoothing,
// a reduced METEOR variant (exact + suffix-stem unigram matching with a
// fragmentation penalty; no synonym stage, and not comparable to full
// METEOR), and output-length statistics. Tokens are opaque symbols.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace umr {

class metric_error : public std::runtime_error {
 public:
  enum class Kind { EmptyCorpus };
  metric_error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct EvalPair {
  std::vector<std::string> candidate;
  std::vector<std::string> reference;
  std::string language;  // tokenization policy marker, e.g. "english", "chinese"
};

// Whitespace tokens for most languages; one token per Unicode codepoint
// (whitespace skipped) for Chinese.
inline bool per_character_language(std::string_view language) {
  std::string low(language);
  for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return low == "chinese" || low == "zh" || low == "zho" || low == "cmn" ||
         low.rfind("zh-", 0) == 0 || low.rfind("zh_", 0) == 0;
}

inline std::vector<std::string> tokenize(std::string_view text, std::string_view language = "") {
  std::vector<std::string> tokens;
  if (per_character_language(language)) {
    std::size_t i = 0;
    while (i < text.size()) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      std::size_t len = 1;
      if ((c & 0x80u) == 0)
        len = 1;
      else if ((c & 0xE0u) == 0xC0u)
        len = 2;
      else if ((c & 0xF0u) == 0xE0u)
        len = 3;
      else if ((c & 0xF8u) == 0xF0u)
        len = 4;
      if (len > text.size() - i) len = text.size() - i;
      if (!(len == 1 && std::isspace(c))) tokens.emplace_back(text.substr(i, len));
      i += len;
    }
    return tokens;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

enum class BleuSmoothing {
  None,
  AddOne,  // add one to numerator and denominator of the n>1 precisions
};

// Corpus-level BLEU. N-gram orders with no candidate n-grams anywhere in the
// corpus are excluded from the geometric mean; a zero unigram precision (the
// only order that is never smoothed) yields 0. An identical corpus scores
// exactly 1 under either smoothing mode.
inline double bleu(const std::vector<EvalPair>& pairs, int max_n = 4,
                   BleuSmoothing smoothing = BleuSmoothing::AddOne) {
  if (pairs.empty()) throw metric_error(metric_error::Kind::EmptyCorpus, "no evaluation pairs");

  std::vector<std::size_t> matches(static_cast<std::size_t>(max_n), 0);
  std::vector<std::size_t> totals(static_cast<std::size_t>(max_n), 0);
  std::size_t cand_len = 0, ref_len = 0;

  auto count_ngrams = [](const std::vector<std::string>& toks, int n) {
    std::map<std::string, std::size_t> counts;
    if (static_cast<int>(toks.size()) < n) return counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= toks.size(); ++i) {
      std::string key;
      for (int k = 0; k < n; ++k) {
        key += toks[i + static_cast<std::size_t>(k)];
        key += '\x1f';
      }
      ++counts[key];
    }
    return counts;
  };

  for (const auto& pair : pairs) {
    cand_len += pair.candidate.size();
    ref_len += pair.reference.size();
    for (int n = 1; n <= max_n; ++n) {
      auto cand = count_ngrams(pair.candidate, n);
      auto ref = count_ngrams(pair.reference, n);
      for (const auto& [gram, count] : cand) {
        totals[static_cast<std::size_t>(n - 1)] += count;
        auto it = ref.find(gram);
        if (it != ref.end())
          matches[static_cast<std::size_t>(n - 1)] += std::min(count, it->second);
      }
    }
  }

  if (cand_len == 0) return 0.0;

  double log_sum = 0;
  int effective_orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::size_t total = totals[static_cast<std::size_t>(n - 1)];
    std::size_t match = matches[static_cast<std::size_t>(n - 1)];
    if (total == 0) continue;
    double p;
    if (n > 1 && smoothing == BleuSmoothing::AddOne)
      p = static_cast<double>(match + 1) / static_cast<double>(total + 1);
    else
      p = static_cast<double>(match) / static_cast<double>(total);
    if (p == 0.0) return 0.0;
    log_sum += std::log(p);
    ++effective_orders;
  }
  if (effective_orders == 0) return 0.0;
  log_sum /= static_cast<double>(effective_orders);

  double bp = 1.0;
  if (cand_len < ref_len)
    bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return bp * std::exp(log_sum);
}

namespace metrics_detail {

// Light suffix stemmer for the stem-match stage: lowercase, strip one common
// suffix when at least three characters remain.
inline std::string stem(std::string_view word) {
  std::string w(word);
  for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  static constexpr std::string_view suffixes[] = {"ing", "ed", "es", "ly", "s", "e"};
  for (auto suffix : suffixes) {
    if (w.size() > suffix.size() + 2 && w.ends_with(suffix)) {
      w.erase(w.size() - suffix.size());
      break;
    }
  }
  return w;
}

struct PairAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

inline PairAlignment align_unigrams(const std::vector<std::string>& cand,
                                    const std::vector<std::string>& ref) {
  const std::size_t nc = cand.size(), nr = ref.size();
  std::vector<int> cand_to_ref(nc, -1);
  std::vector<bool> ref_used(nr, false);

  // Stage 1: exact matches, left to right, first free reference slot.
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      if (!ref_used[j] && cand[i] == ref[j]) {
        cand_to_ref[i] = static_cast<int>(j);
        ref_used[j] = true;
        break;
      }
  // Stage 2: suffix-stem matches on what is left.
  for (std::size_t i = 0; i < nc; ++i) {
    if (cand_to_ref[i] >= 0) continue;
    std::string cs = stem(cand[i]);
    for (std::size_t j = 0; j < nr; ++j)
      if (!ref_used[j] && cs == stem(ref[j])) {
        cand_to_ref[i] = static_cast<int>(j);
        ref_used[j] = true;
        break;
      }
  }

  PairAlignment out;
  int prev_ref = -2;
  for (std::size_t i = 0; i < nc; ++i) {
    if (cand_to_ref[i] < 0) continue;
    ++out.matches;
    if (cand_to_ref[i] != prev_ref + 1) ++out.chunks;  // run broken
    prev_ref = cand_to_ref[i];
  }
  return out;
}

}  // namespace metrics_detail

// Reduced METEOR variant over exact + stem unigram matches:
//   Fmean = 10PR / (R + 9P),  penalty = 0.5 * frag^3,
//   frag  = sum_i(chunks_i - 1) / sum_i(matches_i),
//   score = Fmean * (1 - penalty).
// The (chunks - 1) fragmentation puts a perfectly ordered full match at
// exactly 1.0 and penalizes scrambled orderings.
inline double meteor_lite(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw metric_error(metric_error::Kind::EmptyCorpus, "no evaluation pairs");

  std::size_t matches = 0, chunk_breaks = 0, cand_len = 0, ref_len = 0;
  for (const auto& pair : pairs) {
    auto a = metrics_detail::align_unigrams(pair.candidate, pair.reference);
    matches += a.matches;
    if (a.matches > 0) chunk_breaks += a.chunks - 1;
    cand_len += pair.candidate.size();
    ref_len += pair.reference.size();
  }
  if (matches == 0 || cand_len == 0 || ref_len == 0) return 0.0;

  double p = static_cast<double>(matches) / static_cast<double>(cand_len);
  double r = static_cast<double>(matches) / static_cast<double>(ref_len);
  double fmean = 10.0 * p * r / (r + 9.0 * p);
  double frag = static_cast<double>(chunk_breaks) / static_cast<double>(matches);
  double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

struct LengthStats {
  double mean = 0;
  std::size_t sentences = 0;

  bool empty() const { return sentences == 0; }
};

inline LengthStats length_stats(const std::vector<std::vector<std::string>>& sentences) {
  LengthStats out;
  out.sentences = sentences.size();
  if (sentences.empty()) return out;  // mean 0; callers warn on .empty()
  std::size_t total = 0;
  for (const auto& s : sentences) total += s.size();
  out.mean = static_cast<double>(total) / static_cast<double>(sentences.size());
  return out;
}

// Per-model mean-length table over several named candidate sets.
inline std::string length_table(
    const std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>>& sets) {
  std::string out = "model\tsentences\tmean_length\n";
  for (const auto& [name, sentences] : sets) {
    auto stats = length_stats(sentences);
    out += name + "\t" + std::to_string(stats.sentences) + "\t" + std::to_string(stats.mean) +
           "\n";
  }
  return out;
}

struct MetricReport {
  double bleu = 0;
  double meteor_lite = 0;
  std::map<std::string, double> external_scores;
  std::vector<std::string> external_failures;  // scorers that did not return
  LengthStats candidate_lengths;
  LengthStats reference_lengths;
};

inline std::string metric_report_tsv(const MetricReport& r) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    return s;
  };
  std::string out = "metric\tvalue\n";
  out += "bleu\t" + num(r.bleu) + "\n";
  out += "meteor_lite\t" + num(r.meteor_lite) + "\n";
  for (const auto& [name, score] : r.external_scores) out += name + "\t" + num(score) + "\n";
  for (const auto& name : r.external_failures) out += name + "\tunavailable\n";
  out += "mean_candidate_length\t" + num(r.candidate_lengths.mean) + "\n";
  out += "mean_reference_length\t" + num(r.reference_lengths.mean) + "\n";
  return out;
}

}  // namespace umr
