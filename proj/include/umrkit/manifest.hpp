#pragma once

// Run manifests: every CLI invocation records its subcommand, options, and
// input digests so a run can be replayed byte-identically. Timestamps live
// only here, never in produced artifacts.

#include <array>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace umr {

namespace digest_detail {

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

inline constexpr std::array<std::uint32_t, 64> kRound = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

}  // namespace digest_detail

inline std::string sha256_hex(std::string_view data) {
  using namespace digest_detail;
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

  std::string padded(data);
  const std::uint64_t bit_len = static_cast<std::uint64_t>(data.size()) * 8;
  padded.push_back('\x80');
  while (padded.size() % 64 != 56) padded.push_back('\0');
  for (int i = 7; i >= 0; --i)
    padded.push_back(static_cast<char>((bit_len >> (i * 8)) & 0xff));

  for (std::size_t block = 0; block < padded.size(); block += 64) {
    std::array<std::uint32_t, 64> w{};
    for (int i = 0; i < 16; ++i)
      w[static_cast<std::size_t>(i)] =
          (static_cast<std::uint32_t>(static_cast<unsigned char>(padded[block + 4 * i])) << 24) |
          (static_cast<std::uint32_t>(static_cast<unsigned char>(padded[block + 4 * i + 1]))
           << 16) |
          (static_cast<std::uint32_t>(static_cast<unsigned char>(padded[block + 4 * i + 2]))
           << 8) |
          static_cast<std::uint32_t>(static_cast<unsigned char>(padded[block + 4 * i + 3]));
    for (int i = 16; i < 64; ++i) {
      std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[static_cast<std::size_t>(i)] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    auto [a, b, c, d, e, f, g, hh] = h;
    for (int i = 0; i < 64; ++i) {
      std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      std::uint32_t ch = (e & f) ^ (~e & g);
      std::uint32_t t1 = hh + s1 + ch + kRound[static_cast<std::size_t>(i)] +
                         w[static_cast<std::size_t>(i)];
      std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      std::uint32_t t2 = s0 + maj;
      hh = g;
      g = f;
      f = e;
      e = d + t1;
      d = c;
      c = b;
      b = a;
      a = t1 + t2;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
    h[5] += f;
    h[6] += g;
    h[7] += hh;
  }

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint32_t word : h)
    for (int shift = 28; shift >= 0; shift -= 4) out += hex[(word >> shift) & 0xf];
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

struct RunManifest {
  std::string tool = "umrkit";
  std::string version;
  std::string subcommand;
  nlohmann::json options;
  std::vector<std::pair<std::string, std::string>> inputs;  // (path, sha256)
  std::vector<std::string> outputs;
  std::string created;  // UTC, ISO 8601

  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_hex(read_file(path))); }

  void stamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    created = buf;
  }

  nlohmann::json to_json() const {
    nlohmann::json inputs_json = nlohmann::json::array();
    for (const auto& [path, digest] : inputs)
      inputs_json.push_back({{"path", path}, {"sha256", digest}});
    return {{"tool", tool},          {"version", version}, {"subcommand", subcommand},
            {"options", options},    {"inputs", inputs_json},
            {"outputs", outputs},    {"created", created}};
  }

  static RunManifest from_json(const nlohmann::json& j) {
    RunManifest m;
    m.tool = j.value("tool", "umrkit");
    m.version = j.value("version", "");
    m.subcommand = j.at("subcommand").get<std::string>();
    m.options = j.value("options", nlohmann::json::object());
    if (j.contains("inputs"))
      for (const auto& item : j["inputs"])
        m.inputs.emplace_back(item.value("path", ""), item.value("sha256", ""));
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
    m.created = j.value("created", "");
    return m;
  }

  void save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

  static RunManifest load(const std::string& path) {
    return from_json(nlohmann::json::parse(read_file(path)));
  }
};

}  // namespace umr
