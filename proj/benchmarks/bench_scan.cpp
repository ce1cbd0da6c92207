#include <benchmark/benchmark.h>

#include "acsx/analysis.hpp"
#include "acsx/matcher.hpp"
#include "corpus.hpp"

namespace {

constexpr size_t kTextBytes = size_t{1} << 18;

struct Fixture {
  acsx::Dictionary dict = acsx::Dictionary::from_bytes(acsx_bench::dna_patterns(2000, 6, 24, 21));
  std::string text = acsx_bench::dna_text(kTextBytes, 22);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::span<const uint8_t> text_bytes() {
  const auto& text = fixture().text;
  return {reinterpret_cast<const uint8_t*>(text.data()), text.size()};
}

// Arg: the density parameter t.
void BM_ScanStreaming(benchmark::State& state) {
  acsx::IndexConfig config;
  config.t = static_cast<uint32_t>(state.range(0));
  const auto index = acsx::build_index(fixture().dict, config);
  acsx::ScanStats stats;
  for (auto _ : state) {
    uint64_t count = acsx::scan(index, text_bytes(), [](const acsx::Occurrence&) {}, &stats);
    benchmark::DoNotOptimize(count);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(kTextBytes));
  state.counters["index_bits"] = static_cast<double>(index.sizes().total());
  state.counters["steps_per_letter"] = static_cast<double>(stats.parent_edge_steps()) / stats.letters;
}
BENCHMARK(BM_ScanStreaming)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ScanSmp(benchmark::State& state) {
  const auto index = acsx::build_index(fixture().dict);
  const auto symbols = acsx::map_text(index, text_bytes());
  for (auto _ : state) {
    uint64_t count = acsx::smp_scan(index, symbols, [](const acsx::Occurrence&) {});
    benchmark::DoNotOptimize(count);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(kTextBytes));
}
BENCHMARK(BM_ScanSmp)->Unit(benchmark::kMillisecond);

void BM_ScanNaive(benchmark::State& state) {
  const acsx::NaiveAhoCorasick automaton(fixture().dict);
  std::vector<acsx::Symbol> symbols;
  symbols.reserve(kTextBytes);
  for (char ch : fixture().text) symbols.push_back(fixture().dict.map_byte(static_cast<uint8_t>(ch)));
  for (auto _ : state) {
    uint64_t count = automaton.scan(symbols, [](const acsx::Occurrence&) {});
    benchmark::DoNotOptimize(count);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(kTextBytes));
  state.counters["states"] = static_cast<double>(automaton.state_count());
}
BENCHMARK(BM_ScanNaive)->Unit(benchmark::kMillisecond);

}  // namespace
