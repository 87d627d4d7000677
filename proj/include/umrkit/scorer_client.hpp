#pragma once

// Client for external embedding-based scorers. Pairs are POSTed as JSON
// lines, one object per pair with fields {id, candidate, reference,
// language}; the service answers with JSON lines {id, score}. Scores are
// never fabricated: a pair the service did not answer is an error, not a
// default value.

#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "umrkit/metrics.hpp"

namespace umr {

class scorer_error : public std::runtime_error {
 public:
  enum class Kind { EndpointUnreachable, MalformedResponse, PartialBatch };

  scorer_error(Kind kind, const std::string& what, std::vector<std::string> missing = {})
      : std::runtime_error(what), kind_(kind), missing_ids_(std::move(missing)) {}

  Kind kind() const { return kind_; }
  const std::vector<std::string>& missing_ids() const { return missing_ids_; }

 private:
  Kind kind_;
  std::vector<std::string> missing_ids_;
};

struct ScorerEndpoint {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string path = "/score";
  std::string name = "external";
  std::size_t batch_size = 32;
  std::size_t max_concurrent_batches = 1;
  int timeout_seconds = 30;
};

struct ScoreItem {
  std::string id;
  std::string candidate;
  std::string reference;
  std::string language;
};

struct ExternalScoreResult {
  std::string name;
  std::map<std::string, double> per_id;
  double mean = 0;
};

namespace scorer_detail {

inline std::string encode_batch(const std::vector<ScoreItem>& batch) {
  std::string body;
  for (const auto& item : batch) {
    nlohmann::json line = {{"id", item.id},
                           {"candidate", item.candidate},
                           {"reference", item.reference},
                           {"language", item.language}};
    body += line.dump();
    body += '\n';
  }
  return body;
}

inline void decode_batch(const std::string& body, std::map<std::string, double>& scores) {
  std::size_t start = 0;
  while (start < body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string::npos) end = body.size();
    std::string line = body.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw scorer_error(scorer_error::Kind::MalformedResponse,
                         std::string("bad response line: ") + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("id") || !parsed.contains("score") ||
        !parsed["score"].is_number())
      throw scorer_error(scorer_error::Kind::MalformedResponse,
                         "response line missing id/score: " + line);
    std::string id = parsed["id"].is_string() ? parsed["id"].get<std::string>()
                                              : parsed["id"].dump();
    double score = parsed["score"].get<double>();
    if (score < 0.0 || score > 1.0)
      throw scorer_error(scorer_error::Kind::MalformedResponse,
                         "score outside [0,1] for id '" + id + "'");
    scores[id] = score;
  }
}

}  // namespace scorer_detail

// Scores every item, batching requests and running up to
// max_concurrent_batches requests at once. All ids must come back: missing
// ids raise PartialBatch (listing them), ids the service invented raise
// MalformedResponse.
inline ExternalScoreResult external_score(const std::vector<ScoreItem>& items,
                                          const ScorerEndpoint& endpoint) {
  ExternalScoreResult result;
  result.name = endpoint.name;
  if (items.empty()) return result;

  std::vector<std::vector<ScoreItem>> batches;
  for (std::size_t i = 0; i < items.size(); i += endpoint.batch_size) {
    std::size_t end = std::min(items.size(), i + endpoint.batch_size);
    batches.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(i),
                         items.begin() + static_cast<std::ptrdiff_t>(end));
  }

  std::vector<std::map<std::string, double>> batch_scores(batches.size());
  std::vector<std::exception_ptr> batch_errors(batches.size());

  auto run_batch = [&](std::size_t index) {
    try {
      httplib::Client client(endpoint.host, endpoint.port);
      client.set_connection_timeout(endpoint.timeout_seconds);
      client.set_read_timeout(endpoint.timeout_seconds);
      auto res = client.Post(endpoint.path, scorer_detail::encode_batch(batches[index]),
                             "application/x-ndjson");
      if (!res)
        throw scorer_error(scorer_error::Kind::EndpointUnreachable,
                           "cannot reach scorer at " + endpoint.host + ":" +
                               std::to_string(endpoint.port));
      if (res->status != 200)
        throw scorer_error(scorer_error::Kind::EndpointUnreachable,
                           "scorer returned HTTP " + std::to_string(res->status));
      scorer_detail::decode_batch(res->body, batch_scores[index]);
    } catch (...) {
      batch_errors[index] = std::current_exception();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, endpoint.max_concurrent_batches);
  for (std::size_t base = 0; base < batches.size(); base += workers) {
    std::vector<std::thread> pool;
    for (std::size_t k = base; k < std::min(batches.size(), base + workers); ++k)
      pool.emplace_back(run_batch, k);
    for (auto& t : pool) t.join();
  }
  for (auto& err : batch_errors)
    if (err) std::rethrow_exception(err);

  std::map<std::string, double> merged;
  for (auto& scores : batch_scores) merged.merge(scores);

  std::vector<std::string> missing;
  for (const auto& item : items)
    if (!merged.count(item.id)) missing.push_back(item.id);
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw scorer_error(scorer_error::Kind::PartialBatch,
                       "scorer returned no score for: " + list, missing);
  }
  for (const auto& item : items) {
    auto it = merged.find(item.id);
    if (it == merged.end()) continue;
    result.per_id[item.id] = it->second;
    merged.erase(it);
  }
  if (!merged.empty())
    throw scorer_error(scorer_error::Kind::MalformedResponse,
                       "scorer returned scores for unknown ids");

  double sum = 0;
  for (const auto& [id, score] : result.per_id) sum += score;
  result.mean = sum / static_cast<double>(result.per_id.size());
  return result;
}

// Adapter from tokenized pairs: ids are the pair indexes, text is the tokens
// joined with single spaces.
inline ExternalScoreResult external_score(const std::vector<EvalPair>& pairs,
                                          const ScorerEndpoint& endpoint) {
  std::vector<ScoreItem> items;
  items.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto join = [](const std::vector<std::string>& tokens) {
      std::string out;
      for (std::size_t k = 0; k < tokens.size(); ++k) {
        if (k) out += ' ';
        out += tokens[k];
      }
      return out;
    };
    items.push_back({std::to_string(i), join(pairs[i].candidate), join(pairs[i].reference),
                     pairs[i].language});
  }
  return external_score(items, endpoint);
}

}  // namespace umr
