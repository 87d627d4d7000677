#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "umrkit/scorer_client.hpp"

using namespace umr;
using nlohmann::json;

namespace {

// In-process mock scorer. The handler receives the parsed request lines and
// returns the raw response body.
class MockScorer {
 public:
  using Handler = std::function<std::string(const std::vector<json>&)>;

  explicit MockScorer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      std::vector<json> lines;
      std::size_t start = 0;
      while (start < req.body.size()) {
        std::size_t end = req.body.find('\n', start);
        if (end == std::string::npos) end = req.body.size();
        std::string line = req.body.substr(start, end - start);
        start = end + 1;
        if (!line.empty()) lines.push_back(json::parse(line));
      }
      res.set_content(handler_(lines), "application/x-ndjson");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockScorer() {
    server_.stop();
    thread_.join();
  }

  ScorerEndpoint endpoint() const {
    ScorerEndpoint ep;
    ep.host = "127.0.0.1";
    ep.port = port_;
    ep.name = "mock";
    return ep;
  }

  int requests() const { return requests_; }

 private:
  httplib::Server server_;
  Handler handler_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
};

std::vector<ScoreItem> three_items() {
  return {{"0", "they dumped pears", "they dumped all pears", "english"},
          {"1", "a tree", "the tree", "english"},
          {"2", "pleasure", "pleasure", "english"}};
}

std::string echo_score(const std::vector<json>& lines, double score) {
  std::string out;
  for (const auto& line : lines)
    out += json{{"id", line.at("id")}, {"score", score}}.dump() + "\n";
  return out;
}

}  // namespace

TEST_CASE("mock endpoint echoing 1.0 per pair yields corpus score 1.0") {
  MockScorer mock([](const auto& lines) { return echo_score(lines, 1.0); });
  auto result = external_score(three_items(), mock.endpoint());
  CHECK(result.mean == 1.0);
  REQUIRE(result.per_id.size() == 3);
  CHECK(result.per_id.at("1") == 1.0);
  CHECK(result.name == "mock");
}

TEST_CASE("request ids round-trip unchanged") {
  std::vector<std::string> seen;
  MockScorer mock([&](const std::vector<json>& lines) {
    for (const auto& line : lines) seen.push_back(line.at("id").get<std::string>());
    return echo_score(lines, 0.5);
  });
  auto result = external_score(three_items(), mock.endpoint());
  CHECK(seen == std::vector<std::string>{"0", "1", "2"});
  for (const auto& [id, score] : result.per_id) CHECK(score == 0.5);
}

TEST_CASE("half-answered batch raises PartialBatch with the missing ids") {
  MockScorer mock([](const std::vector<json>& lines) {
    std::string out;
    bool keep = true;
    for (const auto& line : lines) {
      if (keep) out += json{{"id", line.at("id")}, {"score", 0.9}}.dump() + "\n";
      keep = !keep;
    }
    return out;
  });
  try {
    external_score(three_items(), mock.endpoint());
    FAIL("expected scorer_error");
  } catch (const scorer_error& e) {
    CHECK(e.kind() == scorer_error::Kind::PartialBatch);
    CHECK(e.missing_ids() == std::vector<std::string>{"1"});
  }
}

TEST_CASE("garbage and protocol violations raise MalformedResponse") {
  MockScorer garbage([](const auto&) { return std::string("not json at all\n"); });
  CHECK_THROWS_AS(external_score(three_items(), garbage.endpoint()), scorer_error);

  MockScorer out_of_range(
      [](const auto& lines) { return echo_score(lines, 1.5); });
  try {
    external_score(three_items(), out_of_range.endpoint());
    FAIL("expected scorer_error");
  } catch (const scorer_error& e) {
    CHECK(e.kind() == scorer_error::Kind::MalformedResponse);
  }

  MockScorer invented([](const std::vector<json>& lines) {
    std::string out = echo_score(lines, 0.5);
    out += json{{"id", "zz-unknown"}, {"score", 0.5}}.dump() + "\n";
    return out;
  });
  try {
    external_score(three_items(), invented.endpoint());
    FAIL("expected scorer_error");
  } catch (const scorer_error& e) {
    CHECK(e.kind() == scorer_error::Kind::MalformedResponse);
  }
}

TEST_CASE("unreachable endpoint") {
  ScorerEndpoint nowhere;
  nowhere.host = "127.0.0.1";
  nowhere.port = 1;  // nothing listens there
  nowhere.timeout_seconds = 2;
  try {
    external_score(three_items(), nowhere);
    FAIL("expected scorer_error");
  } catch (const scorer_error& e) {
    CHECK(e.kind() == scorer_error::Kind::EndpointUnreachable);
  }
}

TEST_CASE("batch size controls the number of requests") {
  MockScorer mock([](const auto& lines) { return echo_score(lines, 0.25); });
  std::vector<ScoreItem> items;
  for (int i = 0; i < 5; ++i)
    items.push_back({std::to_string(i), "c", "r", "english"});
  ScorerEndpoint ep = mock.endpoint();
  ep.batch_size = 2;
  ep.max_concurrent_batches = 2;
  auto result = external_score(items, ep);
  CHECK(mock.requests() == 3);
  CHECK(result.per_id.size() == 5);
  CHECK(result.mean == 0.25);
}

TEST_CASE("EvalPair adapter derives ids from positions") {
  MockScorer mock([](const auto& lines) { return echo_score(lines, 1.0); });
  std::vector<EvalPair> pairs = {{{"a", "b"}, {"a", "b"}, "english"},
                                 {{"c"}, {"c"}, "english"}};
  auto result = external_score(pairs, mock.endpoint());
  CHECK(result.per_id.count("0") == 1);
  CHECK(result.per_id.count("1") == 1);
  CHECK(result.mean == 1.0);
}
