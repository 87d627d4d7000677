// umrkit: validate, convert, score, split, and evaluate UMR/AMR corpora.
//
// One binary with subcommands. Every artifact-producing run writes a
// manifest (subcommand, options, input digests) next to its outputs;
// `umrkit --manifest FILE` replays a recorded run byte-identically.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "umrkit/convert.hpp"
#include "umrkit/corpus.hpp"
#include "umrkit/manifest.hpp"
#include "umrkit/metrics.hpp"
#include "umrkit/penman.hpp"
#include "umrkit/rules.hpp"
#include "umrkit/scorer_client.hpp"
#include "umrkit/smatch.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) { return umr::read_file(path); }

// Directories expand to their .umr/.txt files, sorted for determinism.
std::vector<std::string> expand_inputs(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".umr" || ext == ".txt") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw std::runtime_error("input not found: " + p);
    }
  }
  if (files.empty()) throw std::runtime_error("no input files");
  return files;
}

// "english_umr-0001.umr" -> "english"; falls back to the whole stem.
std::string language_from_filename(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  auto cut = stem.find('_');
  std::string lang = cut == std::string::npos ? stem : stem.substr(0, cut);
  for (char& c : lang) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return lang;
}

template <typename F>
void parallel_for(std::size_t count, int jobs, F&& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

void finish_manifest(umr::RunManifest& manifest, const std::string& outdir) {
  manifest.tool = "umrkit";
  manifest.version = kVersion;
  manifest.stamp();
  manifest.save((fs::path(outdir) / "manifest.json").string());
}

std::vector<umr::UmrAnnotation> load_corpus(const json& opt, const std::vector<std::string>& files,
                                            std::vector<std::string>& diagnostics) {
  umr::UmrParseConfig config;
  config.lenient = opt.value("lenient", false);
  if (opt.contains("graph_header")) config.graph_headers = {opt["graph_header"].get<std::string>()};
  if (opt.contains("alignment_header"))
    config.alignment_headers = {opt["alignment_header"].get<std::string>()};
  if (opt.contains("doc_header")) config.doc_headers = {opt["doc_header"].get<std::string>()};

  std::string forced_language = opt.value("language", "");
  std::vector<umr::UmrAnnotation> corpus;
  for (const auto& file : files) {
    std::string language =
        forced_language.empty() ? language_from_filename(file) : forced_language;
    auto result = umr::parse_umr_file(slurp(file), language, config);
    for (auto& d : result.diagnostics) diagnostics.push_back(file + ": " + d);
    corpus.insert(corpus.end(), result.annotations.begin(), result.annotations.end());
  }
  return corpus;
}

int run_validate(const json& opt) {
  auto files = expand_inputs(opt.at("inputs").get<std::vector<std::string>>());
  bool penman_mode = opt.value("penman", false);
  bool lenient = opt.value("lenient", false);
  bool failed = false;

  for (const auto& file : files) {
    try {
      if (penman_mode) {
        auto result = umr::parse_penman_blocks(slurp(file), lenient);
        std::cout << file << ": " << result.graphs.size() << " graphs";
        if (!result.diagnostics.empty())
          std::cout << ", " << result.diagnostics.size() << " warnings";
        std::cout << "\n";
        for (const auto& d : result.diagnostics) std::cerr << "warning: " << file << ": " << d
                                                           << "\n";
      } else {
        std::vector<std::string> diagnostics;
        json sub = opt;
        auto corpus = load_corpus(sub, {file}, diagnostics);
        std::size_t doc_level = 0;
        for (const auto& a : corpus)
          if (umr::is_document_level(a)) ++doc_level;
        std::cout << file << ": " << corpus.size() << " annotations (" << doc_level
                  << " document-level)";
        if (!diagnostics.empty()) std::cout << ", " << diagnostics.size() << " warnings";
        std::cout << "\n";
        for (const auto& d : diagnostics) std::cerr << "warning: " << d << "\n";
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << file << ": " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? 1 : 0;
}

int run_convert(const json& opt) {
  auto files = expand_inputs(opt.at("inputs").get<std::vector<std::string>>());
  auto rules = umr::load_rules(opt.at("rules").get<std::string>());
  bool strict = opt.value("strict", false);
  bool penman_mode = opt.value("penman", false);
  int indent = opt.value("indent", 4);
  int jobs = opt.value("jobs", 1);
  std::string outdir = opt.at("out").get<std::string>();
  fs::create_directories(outdir);

  umr::RunManifest manifest;
  manifest.subcommand = "convert";
  manifest.options = opt;
  for (const auto& f : files) manifest.add_input(f);
  manifest.add_input(opt.at("rules").get<std::string>());

  std::string report_path = opt.value("report", "");
  std::string report_all;
  if (!report_path.empty()) report_all = "id\tcategory\tdetail\tcount\n";

  std::set<std::string> used_names;
  for (const auto& file : files) {
    std::vector<std::string> ids;
    std::vector<umr::SemGraph> graphs;
    if (penman_mode) {
      auto blocks = umr::parse_penman_blocks(slurp(file), opt.value("lenient", false));
      for (std::size_t i = 0; i < blocks.graphs.size(); ++i) {
        ids.push_back("block-" + std::to_string(i + 1));
        graphs.push_back(blocks.graphs[i]);
      }
      for (const auto& d : blocks.diagnostics) std::cerr << "warning: " << file << ": " << d
                                                         << "\n";
    } else {
      std::vector<std::string> diagnostics;
      auto corpus = load_corpus(opt, {file}, diagnostics);
      for (const auto& d : diagnostics) std::cerr << "warning: " << d << "\n";
      for (const auto& a : corpus) {
        ids.push_back(a.sentence_id);
        graphs.push_back(a.sentence_graph);
      }
    }

    std::vector<umr::SemGraph> converted(graphs.size());
    std::vector<umr::ConversionReport> reports(graphs.size());
    std::vector<std::string> errors(graphs.size());
    parallel_for(graphs.size(), jobs, [&](std::size_t i) {
      try {
        auto [g, report] = umr::convert(graphs[i], rules, strict);
        converted[i] = std::move(g);
        reports[i] = std::move(report);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < errors.size(); ++i)
      if (!errors[i].empty())
        throw std::runtime_error(file + " (" + ids[i] + "): " + errors[i]);

    // Inputs from different directories may share a stem.
    std::string stem = fs::path(file).stem().string();
    std::string name = stem;
    for (int n = 2; !used_names.insert(name).second; ++n)
      name = stem + "-" + std::to_string(n);
    std::string out_path = (fs::path(outdir) / (name + ".amr")).string();
    umr::write_file(out_path, umr::serialize_penman_blocks(converted, indent));
    manifest.outputs.push_back(out_path);

    if (!report_path.empty())
      for (std::size_t i = 0; i < converted.size(); ++i)
        report_all += umr::report_tsv(reports[i], ids[i]);
  }

  if (!report_path.empty()) {
    std::string full = (fs::path(outdir) / report_path).string();
    umr::write_file(full, report_all);
    manifest.outputs.push_back(full);
  }
  finish_manifest(manifest, outdir);
  return 0;
}

int run_smatch(const json& opt) {
  std::string file1 = opt.at("file1").get<std::string>();
  std::string file2 = opt.at("file2").get<std::string>();
  auto blocks1 = umr::parse_penman_blocks(slurp(file1));
  auto blocks2 = umr::parse_penman_blocks(slurp(file2));
  if (blocks1.graphs.size() != blocks2.graphs.size())
    throw std::runtime_error("graph count mismatch: " + std::to_string(blocks1.graphs.size()) +
                             " vs " + std::to_string(blocks2.graphs.size()));

  umr::SmatchOptions options;
  options.restarts = opt.value("restarts", 4);
  options.seed = opt.value("seed", std::uint64_t{0});
  bool micro = opt.value("micro", false);
  int jobs = opt.value("jobs", 1);

  std::vector<std::pair<umr::SemGraph, umr::SemGraph>> pairs;
  for (std::size_t i = 0; i < blocks1.graphs.size(); ++i)
    pairs.emplace_back(blocks1.graphs[i], blocks2.graphs[i]);

  auto result = umr::corpus_smatch(pairs, options, micro, jobs);

  double psum = 0, rsum = 0;
  for (const auto& r : result.per_pair) {
    psum += r.precision;
    rsum += r.recall;
  }
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  std::cout << "Pairs: " << pairs.size() << "\n";
  std::cout << "Precision: " << psum / static_cast<double>(pairs.size()) << "\n";
  std::cout << "Recall: " << rsum / static_cast<double>(pairs.size()) << "\n";
  std::cout << "F1: " << result.average_f1 << (micro ? " (micro)" : "") << "\n";

  std::string per_pair = opt.value("per_pair", "");
  if (!per_pair.empty()) {
    std::ostringstream tsv;
    tsv << "pair\tprecision\trecall\tf1\tmatched\ttriples1\ttriples2\n";
    for (std::size_t i = 0; i < result.per_pair.size(); ++i) {
      const auto& r = result.per_pair[i];
      tsv << i << "\t" << r.precision << "\t" << r.recall << "\t" << r.f1 << "\t"
          << r.matched_triples << "\t" << r.triples_g1 << "\t" << r.triples_g2 << "\n";
    }
    umr::write_file(per_pair, tsv.str());
  }
  return 0;
}

umr::SplitRatios parse_ratios(const std::string& text) {
  umr::SplitRatios ratios;
  std::istringstream in(text);
  char comma1 = 0, comma2 = 0;
  if (!(in >> ratios.train >> comma1 >> ratios.dev >> comma2 >> ratios.test) || comma1 != ',' ||
      comma2 != ',')
    throw usage_error("--ratios expects train,dev,test (e.g. 0.7,0.1,0.2)");
  return ratios;
}

int run_split(const json& opt) {
  auto files = expand_inputs(opt.at("inputs").get<std::vector<std::string>>());
  std::vector<std::string> diagnostics;
  auto corpus = load_corpus(opt, files, diagnostics);
  for (const auto& d : diagnostics) std::cerr << "warning: " << d << "\n";

  if (opt.contains("exclude")) {
    std::vector<std::string> ids;
    std::istringstream in(slurp(opt["exclude"].get<std::string>()));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) ids.push_back(line);
    }
    auto result = umr::exclude_ids(corpus, ids);
    std::cerr << "excluded " << result.removed << " annotations\n";
    for (const auto& id : result.not_found)
      std::cerr << "warning: exclusion id not found: " << id << "\n";
    corpus = std::move(result.remaining);
  }

  auto ratios = parse_ratios(opt.value("ratios", "0.7,0.1,0.2"));
  auto split = umr::split_corpus(corpus, ratios, opt.value("seed", std::uint64_t{0}),
                                 opt.value("contiguous", false));

  std::string outdir = opt.at("out").get<std::string>();
  fs::create_directories(outdir);
  umr::RunManifest manifest;
  manifest.subcommand = "split";
  manifest.options = opt;
  for (const auto& f : files) manifest.add_input(f);

  for (const auto& [lang, part] : split.by_language) {
    auto write_ids = [&](const char* name, const std::vector<umr::UmrAnnotation>& partition) {
      std::string path = (fs::path(outdir) / (lang + "." + name + ".ids")).string();
      umr::write_file(path, umr::partition_id_lines(partition));
      manifest.outputs.push_back(path);
    };
    write_ids("train", part.train);
    write_ids("dev", part.dev);
    write_ids("test", part.test);
  }
  std::string stats_path = (fs::path(outdir) / "split_stats.tsv").string();
  umr::write_file(stats_path, umr::split_stats_tsv(split));
  manifest.outputs.push_back(stats_path);
  finish_manifest(manifest, outdir);
  std::cout << umr::split_stats_tsv(split);
  return 0;
}

int run_stats(const json& opt) {
  auto files = expand_inputs(opt.at("inputs").get<std::vector<std::string>>());
  std::vector<std::string> diagnostics;
  auto corpus = load_corpus(opt, files, diagnostics);
  for (const auto& d : diagnostics) std::cerr << "warning: " << d << "\n";

  std::string tsv = umr::stats_tsv(umr::corpus_stats(corpus));
  std::cout << tsv;
  if (opt.contains("out")) {
    std::string outdir = opt["out"].get<std::string>();
    fs::create_directories(outdir);
    umr::write_file((fs::path(outdir) / "stats.tsv").string(), tsv);
    umr::RunManifest manifest;
    manifest.subcommand = "stats";
    manifest.options = opt;
    for (const auto& f : files) manifest.add_input(f);
    manifest.outputs.push_back((fs::path(outdir) / "stats.tsv").string());
    finish_manifest(manifest, outdir);
  }
  return 0;
}

int run_eval_text(const json& opt) {
  std::string language = opt.value("language", "english");
  std::vector<umr::EvalPair> pairs;
  std::vector<umr::ScoreItem> items;

  if (opt.contains("tsv")) {
    std::istringstream in(slurp(opt["tsv"].get<std::string>()));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto tab1 = line.find('\t');
      auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos) throw usage_error("TSV rows need id\\tcandidate\\treference");
      std::string id = line.substr(0, tab1);
      std::string cand = line.substr(tab1 + 1, tab2 - tab1 - 1);
      std::string ref = line.substr(tab2 + 1);
      pairs.push_back({umr::tokenize(cand, language), umr::tokenize(ref, language), language});
      items.push_back({id, cand, ref, language});
    }
  } else {
    std::istringstream cin_(slurp(opt.at("candidates").get<std::string>()));
    std::istringstream rin(slurp(opt.at("references").get<std::string>()));
    std::string cand, ref;
    std::size_t index = 0;
    while (std::getline(cin_, cand)) {
      if (!std::getline(rin, ref))
        throw usage_error("candidate and reference files have different line counts");
      if (!cand.empty() && cand.back() == '\r') cand.pop_back();
      if (!ref.empty() && ref.back() == '\r') ref.pop_back();
      pairs.push_back({umr::tokenize(cand, language), umr::tokenize(ref, language), language});
      items.push_back({std::to_string(index++), cand, ref, language});
    }
    std::string leftover;
    if (std::getline(rin, leftover))
      throw usage_error("candidate and reference files have different line counts");
  }
  if (pairs.empty()) throw usage_error("no evaluation pairs");

  umr::MetricReport report;
  report.bleu = umr::bleu(pairs, opt.value("max_n", 4),
                          opt.value("no_smoothing", false) ? umr::BleuSmoothing::None
                                                           : umr::BleuSmoothing::AddOne);
  report.meteor_lite = umr::meteor_lite(pairs);
  std::vector<std::vector<std::string>> cands, refs;
  for (const auto& p : pairs) {
    cands.push_back(p.candidate);
    refs.push_back(p.reference);
  }
  report.candidate_lengths = umr::length_stats(cands);
  report.reference_lengths = umr::length_stats(refs);

  if (opt.contains("scorer_port")) {
    umr::ScorerEndpoint endpoint;
    endpoint.host = opt.value("scorer_host", "127.0.0.1");
    endpoint.port = opt["scorer_port"].get<int>();
    endpoint.path = opt.value("scorer_path", "/score");
    endpoint.name = opt.value("scorer_name", "external");
    endpoint.batch_size = opt.value("scorer_batch", std::size_t{32});
    endpoint.max_concurrent_batches = opt.value("jobs", std::size_t{1});
    try {
      auto scored = umr::external_score(items, endpoint);
      report.external_scores[scored.name] = scored.mean;
    } catch (const umr::scorer_error& e) {
      // Recorded absence, never a fabricated number.
      std::cerr << "warning: external scorer '" << endpoint.name << "' failed: " << e.what()
                << "\n";
      report.external_failures.push_back(endpoint.name);
    }
  }

  std::string tsv = umr::metric_report_tsv(report);
  // Extra candidate sets ("model=path") land in a per-model length table.
  if (opt.contains("lengths")) {
    std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> sets;
    sets.emplace_back("references", refs);
    for (const auto& entry : opt["lengths"].get<std::vector<std::string>>()) {
      auto eq = entry.find('=');
      if (eq == std::string::npos) throw usage_error("--lengths expects model=path");
      std::string name = entry.substr(0, eq);
      std::vector<std::vector<std::string>> sentences;
      std::istringstream in(slurp(entry.substr(eq + 1)));
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        sentences.push_back(umr::tokenize(line, language));
      }
      sets.emplace_back(name, std::move(sentences));
    }
    tsv += umr::length_table(sets);
  }
  std::cout << tsv;
  if (opt.contains("out")) {
    std::string outdir = opt["out"].get<std::string>();
    fs::create_directories(outdir);
    umr::write_file((fs::path(outdir) / "metrics.tsv").string(), tsv);
    json as_json = {{"bleu", report.bleu},
                    {"meteor_lite", report.meteor_lite},
                    {"external_scores", report.external_scores},
                    {"external_failures", report.external_failures},
                    {"mean_candidate_length", report.candidate_lengths.mean},
                    {"mean_reference_length", report.reference_lengths.mean}};
    umr::write_file((fs::path(outdir) / "metrics.json").string(), as_json.dump(2) + "\n");
    umr::RunManifest manifest;
    manifest.subcommand = "eval-text";
    manifest.options = opt;
    if (opt.contains("tsv")) manifest.add_input(opt["tsv"].get<std::string>());
    if (opt.contains("candidates")) manifest.add_input(opt["candidates"].get<std::string>());
    if (opt.contains("references")) manifest.add_input(opt["references"].get<std::string>());
    manifest.outputs.push_back((fs::path(outdir) / "metrics.tsv").string());
    manifest.outputs.push_back((fs::path(outdir) / "metrics.json").string());
    finish_manifest(manifest, outdir);
  }
  return 0;
}

int dispatch(const std::string& subcommand, const json& opt) {
  if (subcommand == "validate") return run_validate(opt);
  if (subcommand == "convert") return run_convert(opt);
  if (subcommand == "smatch") return run_smatch(opt);
  if (subcommand == "split") return run_split(opt);
  if (subcommand == "stats") return run_stats(opt);
  if (subcommand == "eval-text") return run_eval_text(opt);
  throw usage_error("unknown subcommand in manifest: " + subcommand);
}

int replay_manifest(const std::string& path) {
  auto manifest = umr::RunManifest::load(path);
  for (const auto& [input, digest] : manifest.inputs) {
    if (!fs::exists(input)) {
      std::cerr << "warning: recorded input missing: " << input << "\n";
      continue;
    }
    if (umr::sha256_hex(umr::read_file(input)) != digest)
      std::cerr << "warning: input changed since recorded run: " << input << "\n";
  }
  return dispatch(manifest.subcommand, manifest.options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UMR corpus toolchain: parse, convert to AMR, score, split, evaluate"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);

  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "replay a recorded run from its manifest");

  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for per-sentence work")->capture_default_str();

  // validate
  auto* validate = app.add_subcommand("validate", "parse inputs and report problems");
  std::vector<std::string> v_inputs;
  bool v_penman = false, v_lenient = false;
  std::string v_language;
  validate->add_option("inputs", v_inputs, "files or directories")->required();
  validate->add_flag("--penman", v_penman, "inputs are blank-line separated PENMAN blocks");
  validate->add_flag("--lenient", v_lenient, "report malformed blocks instead of failing");
  validate->add_option("--language", v_language, "force the language code");

  // convert
  auto* convert = app.add_subcommand("convert", "convert UMR graphs to AMR");
  std::vector<std::string> c_inputs;
  std::string c_rules, c_out = "out", c_report;
  bool c_strict = false, c_penman = false, c_lenient = false;
  int c_indent = 4;
  std::string c_language;
  convert->add_option("inputs", c_inputs, "files or directories")->required();
  convert->add_option("--rules", c_rules, "conversion rule file")->required();
  convert->add_option("-o,--out", c_out, "output directory")->capture_default_str();
  convert->add_option("--report", c_report, "write a conversion report TSV (relative to -o)");
  convert->add_flag("--strict", c_strict, "fail on disconnections and malformed blocks");
  convert->add_flag("--penman", c_penman, "inputs are PENMAN blocks, not UMR files");
  convert->add_flag("--lenient", c_lenient, "skip malformed blocks with a warning");
  convert->add_option("--indent", c_indent, "PENMAN indent width")->capture_default_str();
  convert->add_option("--language", c_language, "force the language code");

  // smatch
  auto* smatch_cmd = app.add_subcommand("smatch", "score two aligned PENMAN files");
  std::string s_file1, s_file2, s_per_pair;
  int s_restarts = 4;
  std::uint64_t s_seed = 0;
  bool s_micro = false;
  smatch_cmd->add_option("file1", s_file1, "candidate graphs")->required();
  smatch_cmd->add_option("file2", s_file2, "reference graphs")->required();
  smatch_cmd->add_option("--restarts", s_restarts, "hill-climbing restarts")
      ->capture_default_str();
  smatch_cmd->add_option("--seed", s_seed, "random seed")->capture_default_str();
  smatch_cmd->add_option("--per-pair", s_per_pair, "write per-pair results TSV");
  smatch_cmd->add_flag("--micro", s_micro, "micro-average instead of macro");

  // split
  auto* split = app.add_subcommand("split", "deterministic train/dev/test split");
  std::vector<std::string> sp_inputs;
  std::string sp_out = "splits", sp_ratios = "0.7,0.1,0.2", sp_exclude, sp_language;
  std::uint64_t sp_seed = 0;
  bool sp_contiguous = false, sp_lenient = false;
  split->add_option("inputs", sp_inputs, "files or directories")->required();
  split->add_option("--ratios", sp_ratios, "train,dev,test fractions")->capture_default_str();
  split->add_option("--seed", sp_seed, "shuffle seed")->capture_default_str();
  split->add_option("-o,--out", sp_out, "output directory")->capture_default_str();
  split->add_option("--exclude", sp_exclude, "file of sentence ids to drop first");
  split->add_flag("--contiguous", sp_contiguous, "keep file order instead of shuffling");
  split->add_flag("--lenient", sp_lenient, "skip malformed blocks with a warning");
  split->add_option("--language", sp_language, "force the language code");

  // stats
  auto* stats = app.add_subcommand("stats", "per-language corpus statistics");
  std::vector<std::string> st_inputs;
  std::string st_out, st_language;
  bool st_lenient = false;
  stats->add_option("inputs", st_inputs, "files or directories")->required();
  stats->add_option("-o,--out", st_out, "also write stats.tsv into this directory");
  stats->add_flag("--lenient", st_lenient, "skip malformed blocks with a warning");
  stats->add_option("--language", st_language, "force the language code");

  // eval-text
  auto* eval = app.add_subcommand("eval-text", "BLEU / METEOR-lite / length statistics");
  std::string e_cand, e_ref, e_tsv, e_out, e_language = "english";
  std::string e_scorer_host = "127.0.0.1", e_scorer_path = "/score", e_scorer_name = "external";
  int e_scorer_port = 0;
  std::size_t e_scorer_batch = 32;
  bool e_no_smoothing = false;
  std::vector<std::string> e_lengths;
  eval->add_option("--candidates", e_cand, "one candidate sentence per line");
  eval->add_option("--references", e_ref, "one reference sentence per line");
  eval->add_option("--tsv", e_tsv, "id<TAB>candidate<TAB>reference rows");
  eval->add_option("--lengths", e_lengths,
                   "extra model=path sentence files for the per-model length table");
  eval->add_option("--language", e_language, "tokenization language")->capture_default_str();
  eval->add_option("-o,--out", e_out, "write metrics.tsv/.json into this directory");
  eval->add_flag("--no-smoothing", e_no_smoothing, "disable add-one BLEU smoothing");
  eval->add_option("--scorer-port", e_scorer_port, "external scorer port (enables the client)");
  eval->add_option("--scorer-host", e_scorer_host, "external scorer host")->capture_default_str();
  eval->add_option("--scorer-path", e_scorer_path, "external scorer path")->capture_default_str();
  eval->add_option("--scorer-name", e_scorer_name, "name for the external score column")
      ->capture_default_str();
  eval->add_option("--scorer-batch", e_scorer_batch, "pairs per request")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!manifest_path.empty()) return replay_manifest(manifest_path);

    if (validate->parsed()) {
      json opt = {{"inputs", v_inputs}, {"penman", v_penman}, {"lenient", v_lenient}};
      if (!v_language.empty()) opt["language"] = v_language;
      return run_validate(opt);
    }
    if (convert->parsed()) {
      json opt = {{"inputs", c_inputs}, {"rules", c_rules},   {"out", c_out},
                  {"strict", c_strict}, {"penman", c_penman}, {"lenient", c_lenient},
                  {"indent", c_indent}, {"jobs", jobs}};
      if (!c_report.empty()) opt["report"] = c_report;
      if (!c_language.empty()) opt["language"] = c_language;
      return run_convert(opt);
    }
    if (smatch_cmd->parsed()) {
      json opt = {{"file1", s_file1},       {"file2", s_file2}, {"restarts", s_restarts},
                  {"seed", s_seed},         {"micro", s_micro}, {"jobs", jobs}};
      if (!s_per_pair.empty()) opt["per_pair"] = s_per_pair;
      return run_smatch(opt);
    }
    if (split->parsed()) {
      json opt = {{"inputs", sp_inputs},     {"ratios", sp_ratios},
                  {"seed", sp_seed},         {"out", sp_out},
                  {"contiguous", sp_contiguous}, {"lenient", sp_lenient}};
      if (!sp_exclude.empty()) opt["exclude"] = sp_exclude;
      if (!sp_language.empty()) opt["language"] = sp_language;
      return run_split(opt);
    }
    if (stats->parsed()) {
      json opt = {{"inputs", st_inputs}, {"lenient", st_lenient}};
      if (!st_out.empty()) opt["out"] = st_out;
      if (!st_language.empty()) opt["language"] = st_language;
      return run_stats(opt);
    }
    if (eval->parsed()) {
      json opt = {{"language", e_language},
                  {"no_smoothing", e_no_smoothing},
                  {"jobs", jobs}};
      if (!e_cand.empty()) opt["candidates"] = e_cand;
      if (!e_ref.empty()) opt["references"] = e_ref;
      if (!e_tsv.empty()) opt["tsv"] = e_tsv;
      if (!e_out.empty()) opt["out"] = e_out;
      if (!e_lengths.empty()) opt["lengths"] = e_lengths;
      if (e_scorer_port != 0) {
        opt["scorer_port"] = e_scorer_port;
        opt["scorer_host"] = e_scorer_host;
        opt["scorer_path"] = e_scorer_path;
        opt["scorer_name"] = e_scorer_name;
        opt["scorer_batch"] = e_scorer_batch;
      }
      return run_eval_text(opt);
    }
    std::cerr << app.help();
    return 2;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
