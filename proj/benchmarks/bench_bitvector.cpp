#include <benchmark/benchmark.h>

#include <random>

#include "acsx/compressed_bitvector.hpp"
#include "corpus.hpp"

namespace {

constexpr uint64_t kLength = uint64_t{1} << 22;

acsx::BitvectorOptions policy_for(int64_t arg) {
  acsx::BitvectorOptions options;
  options.policy = arg == 0 ? acsx::BitvectorOptions::Policy::kClassOffset : acsx::BitvectorOptions::Policy::kGapCoded;
  return options;
}

// Args: {encoding (0 class-offset, 1 gap-coded), density in per-mille}.
void BM_PartialRank(benchmark::State& state) {
  const auto positions = acsx_bench::random_positions(kLength, state.range(1) / 1000.0, 1);
  const auto bv = acsx::CompressedBitvector::from_positions(kLength, positions, policy_for(state.range(0)));
  std::mt19937_64 rng(2);
  std::vector<uint64_t> queries(4096);
  for (auto& q : queries) q = rng() % kLength;
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv.partial_rank(queries[k]));
    k = (k + 1) & 4095;
  }
  state.counters["bits_per_one"] = static_cast<double>(bv.body_bits()) / std::max<uint64_t>(1, bv.ones());
}
BENCHMARK(BM_PartialRank)->ArgsProduct({{0, 1}, {5, 50, 500}});

void BM_Select(benchmark::State& state) {
  const auto positions = acsx_bench::random_positions(kLength, state.range(1) / 1000.0, 3);
  const auto bv = acsx::CompressedBitvector::from_positions(kLength, positions, policy_for(state.range(0)));
  std::mt19937_64 rng(4);
  std::vector<uint64_t> queries(4096);
  for (auto& q : queries) q = 1 + rng() % bv.ones();
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bv.select(queries[k]));
    k = (k + 1) & 4095;
  }
}
BENCHMARK(BM_Select)->ArgsProduct({{0, 1}, {5, 50, 500}});

void BM_BuildBitvector(benchmark::State& state) {
  const auto positions = acsx_bench::random_positions(kLength, 0.05, 5);
  for (auto _ : state) {
    auto bv = acsx::CompressedBitvector::from_positions(kLength, positions);
    benchmark::DoNotOptimize(bv.ones());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(kLength));
}
BENCHMARK(BM_BuildBitvector)->Unit(benchmark::kMillisecond);

}  // namespace
