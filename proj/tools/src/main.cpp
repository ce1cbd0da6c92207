#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acsx/analysis.hpp"
#include "acsx/compressed_index.hpp"
#include "acsx/error.hpp"
#include "acsx/matcher.hpp"
#include "cli_io.hpp"

namespace {

using namespace acsx;
using namespace acsx::cli;

constexpr size_t kChunk = 1 << 20;

CompressedIndex load_index(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file(path);
  try {
    return CompressedIndex::deserialize(bytes);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kBadMagic:
        throw Failure{kBadMagic, path + ": " + e.what()};
      default:
        throw Failure{kTruncated, path + ": " + e.what()};
    }
  }
}

DictionaryFormat parse_format(const std::string& mode) {
  return mode == "binary" ? DictionaryFormat::kBinary : DictionaryFormat::kNewline;
}

// ---------------------------------------------------------------------------
// build

struct BuildOptions {
  std::string dictionary;
  std::string output;
  std::string input_mode = "newline";
  uint32_t t = 8;
  std::optional<uint64_t> block_size;
  std::string layout = "blocked";
  uint32_t sample_rate = 32;
};

int run_build(const BuildOptions& o) {
  const Dictionary dict = load_dictionary(o.dictionary, parse_format(o.input_mode));
  IndexConfig config;
  config.t = o.t;
  config.block_size = o.block_size;
  config.layout = o.layout == "monolithic" ? NextLayout::kMonolithic : NextLayout::kBlocked;
  config.bitvectors.gap_sample_rate = o.sample_rate;
  const CompressedIndex index = build_index(dict, config);
  const std::vector<uint8_t> bytes = index.serialize();
  std::FILE* out = std::fopen(o.output.c_str(), "wb");
  if (!out) throw Failure{kUnreadable, "cannot write " + o.output};
  const bool ok = std::fwrite(bytes.data(), 1, bytes.size(), out) == bytes.size();
  if (std::fclose(out) != 0 || !ok) throw Failure{kUnreadable, "write error on " + o.output};
  std::cout << "m=" << index.edges() << "\n"
            << "d=" << index.pattern_count() << "\n"
            << "sigma=" << index.sigma() << "\n"
            << "t=" << index.t() << "\n"
            << "W=" << index.dense_set_size() << "\n"
            << "bits=" << index.sizes().total() << "\n"
            << "file_bytes=" << bytes.size() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
  std::string index;
  std::string text;
  bool starts = false;
  std::string format = "tsv";
  std::string engine = "cblz";
};

int run_scan(const ScanOptions& o) {
  const CompressedIndex index = load_index(o.index);
  OutputBuffer out(stdout);
  uint64_t count = 0;
  const bool binary = o.format == "binary";
  const OccurrenceSink sink = [&](const Occurrence& occ) {
    ++count;
    if (binary) {
      out.append_le(occ.end, 8);
      out.append_le(occ.id, 4);
      if (o.starts) out.append_le(occ.start(), 8);
      return;
    }
    out.append_number(occ.end);
    out.append("\t");
    out.append_number(occ.id);
    if (o.starts) {
      out.append("\t");
      out.append_number(occ.start());
    }
    out.append("\n");
  };
  if (o.engine == "cblz") {
    Scanner scanner(index);
    stream_file(o.text, kChunk, [&](std::span<const uint8_t> chunk) { scanner.feed(chunk, sink); });
  } else if (o.engine == "smp") {
    SmpScanner scanner(index);
    stream_file(o.text, kChunk, [&](std::span<const uint8_t> chunk) { scanner.feed(chunk, sink); });
  } else {
    const Dictionary dict = recover_dictionary(index);
    const std::vector<Symbol> text = map_text(index, read_file(o.text));
    NaiveAhoCorasick(dict).scan(text, sink);
  }
  out.flush();
  std::cerr << "count=" << count << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOptions {
  std::string index;
  std::string dictionary;
  std::string input_mode = "newline";
  double alpha = 0.5;
};

int run_stats(const StatsOptions& o) {
  const CompressedIndex index = load_index(o.index);
  SpaceReport report;
  std::optional<EntropyReport> entropy;
  if (o.dictionary.empty()) {
    report = space_report(index);
  } else {
    const Dictionary dict = load_dictionary(o.dictionary, parse_format(o.input_mode));
    const Trie trie = build_full_trie(dict);
    if (trie.edge_count() != index.edges() || trie.sigma() != index.sigma()) {
      throw Failure{kUsage, "dictionary does not match the index"};
    }
    report = entropy_bound_check(index, trie, o.alpha);
    entropy = entropy_report(trie, o.alpha);
  }
  uint64_t total_length = 0;
  for (uint64_t ordinal = 1; ordinal <= index.marked_count(); ++ordinal) {
    const auto [first, last] = index.patterns().range(ordinal);
    total_length += (last - first) * index.patterns().length(ordinal);
  }
  std::ostringstream out;
  out.precision(10);
  out << "avg_length=" << static_cast<double>(total_length) / static_cast<double>(index.pattern_count()) << "\n";
  out << to_key_values(report);
  out << "optimality_gap=" << (static_cast<double>(report.sizes.total()) - report.lower_bound) / static_cast<double>(report.m)
      << "\n";
  if (entropy) {
    std::istringstream lines(to_key_values(*entropy));
    for (std::string line; std::getline(lines, line);) {
      if (line.rfind("lower_bound=", 0) != 0) out << line << "\n";
    }
  }
  std::cout << out.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string dictionary;
  std::string text;
  std::string input_mode = "newline";
  std::vector<std::string> engines = {"cblz", "cblz8", "smp"};
  unsigned repetitions = 3;
};

struct EngineSpec {
  std::string name;
  enum Kind { kCompressed, kSmp, kNaive } kind;
  uint32_t t;
};

EngineSpec parse_engine(const std::string& name) {
  if (name == "smp") return {name, EngineSpec::kSmp, 8};
  if (name == "naive") return {name, EngineSpec::kNaive, 0};
  if (name == "cblz") return {name, EngineSpec::kCompressed, 1};
  if (name.rfind("cblz", 0) == 0 && name.size() > 4 &&
      std::all_of(name.begin() + 4, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const unsigned long t = std::stoul(name.substr(4));
    if (t >= 1 && t <= (1u << 30)) return {name, EngineSpec::kCompressed, static_cast<uint32_t>(t)};
  }
  throw Failure{kUsage, "unknown engine '" + name + "' (expected cblz, cblzN, smp, naive)"};
}

int run_bench(const BenchOptions& o) {
  std::vector<EngineSpec> specs;
  for (const auto& e : o.engines) specs.push_back(parse_engine(e));
  if (o.repetitions == 0) throw Failure{kUsage, "repetitions must be positive"};
  const Dictionary dict = load_dictionary(o.dictionary, parse_format(o.input_mode));
  const std::vector<uint8_t> text_bytes = read_file(o.text);

  std::map<uint32_t, CompressedIndex> indexes;
  auto index_for = [&](uint32_t t) -> const CompressedIndex& {
    auto it = indexes.find(t);
    if (it == indexes.end()) it = indexes.emplace(t, build_index(dict, {.t = t})).first;
    return it->second;
  };

  std::cout << "engine,t,median_ns,occ,index_bits\n";
  std::optional<uint64_t> reference;
  bool disagree = false;
  for (const EngineSpec& spec : specs) {
    std::vector<double> times;
    uint64_t occ = 0;
    uint64_t bits = 0;
    std::optional<NaiveAhoCorasick> naive;
    std::vector<Symbol> mapped;
    if (spec.kind == EngineSpec::kNaive) {
      naive.emplace(dict);
      mapped.resize(text_bytes.size());
      for (size_t i = 0; i < text_bytes.size(); ++i) mapped[i] = dict.map_byte(text_bytes[i]);
    } else {
      const IndexSizes sizes = index_for(spec.t).sizes();
      bits = spec.kind == EngineSpec::kSmp
                 ? sizes.meta + sizes.next_payload + sizes.next_directory + sizes.mark + sizes.pattern_table
                 : sizes.total();
    }
    for (unsigned r = 0; r < o.repetitions; ++r) {
      uint64_t count = 0;
      const OccurrenceSink sink = [&count](const Occurrence&) { ++count; };
      const auto start = std::chrono::steady_clock::now();
      switch (spec.kind) {
        case EngineSpec::kCompressed: {
          Scanner scanner(index_for(spec.t));
          scanner.feed(text_bytes, sink);
          break;
        }
        case EngineSpec::kSmp: {
          SmpScanner scanner(index_for(spec.t));
          scanner.feed(text_bytes, sink);
          break;
        }
        case EngineSpec::kNaive:
          naive->scan(mapped, sink);
          break;
      }
      times.push_back(std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count());
      occ = count;
    }
    std::sort(times.begin(), times.end());
    const double median = times.size() % 2 ? times[times.size() / 2]
                                           : (times[times.size() / 2 - 1] + times[times.size() / 2]) / 2;
    std::cout << spec.name << "," << spec.t << "," << static_cast<uint64_t>(std::llround(median)) << "," << occ << ","
              << bits << "\n";
    if (reference && *reference != occ) disagree = true;
    if (!reference) reference = occ;
  }
  if (disagree) throw Failure{kDisagreement, "engines reported different occurrence counts"};
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed multiple-pattern matcher"};
  app.require_subcommand(1);

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build an index file from a dictionary");
  build_cmd->add_option("dictionary", build.dictionary, "Dictionary file")->required();
  build_cmd->add_option("-o,--output", build.output, "Index file to write")->required();
  build_cmd->add_option("--input-mode", build.input_mode, "newline or binary (u32 length-prefixed)")
      ->check(CLI::IsMember({"newline", "binary"}));
  build_cmd->add_option("-t,--t", build.t, "Failure-tree sampling distance")->check(CLI::Range(1u, 1u << 30));
  build_cmd->add_option("--block-size", build.block_size, "Transition block size in bits")
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("--layout", build.layout, "blocked or monolithic transition array")
      ->check(CLI::IsMember({"blocked", "monolithic"}));
  build_cmd->add_option("--sample-rate", build.sample_rate, "Gap-code sampling period (power of two)")
      ->check([](const std::string& s) -> std::string {
        const unsigned long v = std::stoul(s);
        return v >= 1 && v <= (1ul << 31) && (v & (v - 1)) == 0 ? "" : "must be a power of two";
      });

  ScanOptions scan_opts;
  auto* scan_cmd = app.add_subcommand("scan", "Report every pattern occurrence in a text");
  scan_cmd->add_option("index", scan_opts.index, "Index file")->required();
  scan_cmd->add_option("text", scan_opts.text, "Text file")->required();
  scan_cmd->add_flag("--starts", scan_opts.starts, "Also print start positions");
  scan_cmd->add_option("--format", scan_opts.format, "tsv or binary")->check(CLI::IsMember({"tsv", "binary"}));
  scan_cmd->add_option("--engine", scan_opts.engine, "cblz, smp or naive")
      ->check(CLI::IsMember({"cblz", "smp", "naive"}));

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Print space and entropy statistics");
  stats_cmd->add_option("index", stats.index, "Index file")->required();
  stats_cmd->add_option("dictionary", stats.dictionary, "Dictionary the index was built from");
  stats_cmd->add_option("--input-mode", stats.input_mode, "newline or binary")
      ->check(CLI::IsMember({"newline", "binary"}));
  stats_cmd->add_option("--alpha", stats.alpha, "Entropy order scale")->check(CLI::Range(0.0, 1.0));

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time scanning engines; CSV on stdout");
  bench_cmd->add_option("dictionary", bench.dictionary, "Dictionary file")->required();
  bench_cmd->add_option("text", bench.text, "Text file")->required();
  bench_cmd->add_option("--input-mode", bench.input_mode, "newline or binary")
      ->check(CLI::IsMember({"newline", "binary"}));
  bench_cmd->add_option("--engines", bench.engines, "Engines: cblz (t=1), cblzN (t=N), smp, naive")
      ->delimiter(',');
  bench_cmd->add_option("-r,--repetitions", bench.repetitions, "Runs per engine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build_cmd) return run_build(build);
    if (*scan_cmd) return run_scan(scan_opts);
    if (*stats_cmd) return run_stats(stats);
    if (*bench_cmd) return run_bench(bench);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kUsage : kMalformedDictionary;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
