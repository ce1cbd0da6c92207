#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "acsx/compressed_index.hpp"
#include "corpus.hpp"

namespace {

const acsx::Dictionary& dictionary() {
  static const auto dict = acsx::Dictionary::from_bytes(acsx_bench::dna_patterns(5000, 8, 40, 11));
  return dict;
}

const acsx::CompressedIndex& index_with(uint32_t t) {
  static std::map<uint32_t, acsx::CompressedIndex> cache;
  auto it = cache.find(t);
  if (it == cache.end()) {
    acsx::IndexConfig config;
    config.t = t;
    it = cache.emplace(t, acsx::build_index(dictionary(), config)).first;
  }
  return it->second;
}

void BM_BuildIndex(benchmark::State& state) {
  acsx::IndexConfig config;
  config.t = static_cast<uint32_t>(state.range(0));
  for (auto _ : state) {
    auto index = acsx::build_index(dictionary(), config);
    benchmark::DoNotOptimize(index.edges());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(index_with(config.t).edges()));
}
BENCHMARK(BM_BuildIndex)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Next(benchmark::State& state) {
  const auto& index = index_with(8);
  std::mt19937_64 rng(12);
  std::vector<std::pair<uint32_t, acsx::Symbol>> queries(4096);
  for (auto& [v, c] : queries) {
    v = static_cast<uint32_t>(rng() % (index.edges() + 1));
    c = static_cast<acsx::Symbol>(rng() % index.sigma());
  }
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.next(queries[k].first, queries[k].second));
    k = (k + 1) & 4095;
  }
}
BENCHMARK(BM_Next);

void BM_ParentEdge(benchmark::State& state) {
  const auto& index = index_with(8);
  std::mt19937_64 rng(13);
  std::vector<uint32_t> queries(4096);
  for (auto& v : queries) v = static_cast<uint32_t>(1 + rng() % index.edges());
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.parent_edge(queries[k]));
    k = (k + 1) & 4095;
  }
}
BENCHMARK(BM_ParentEdge);

void BM_FailureParent(benchmark::State& state) {
  const auto& index = index_with(static_cast<uint32_t>(state.range(0)));
  std::vector<uint32_t> members;
  for (uint32_t v = 1; v <= index.edges(); ++v)
    if (index.in_dense_set(v)) members.push_back(v);
  size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.failure_parent(members[k]));
    if (++k == members.size()) k = 0;
  }
}
BENCHMARK(BM_FailureParent)->Arg(1)->Arg(8);

void BM_Serialize(benchmark::State& state) {
  const auto& index = index_with(8);
  for (auto _ : state) {
    auto bytes = index.serialize();
    benchmark::DoNotOptimize(bytes.data());
  }
}
BENCHMARK(BM_Serialize)->Unit(benchmark::kMillisecond);

void BM_Deserialize(benchmark::State& state) {
  const auto bytes = index_with(8).serialize();
  for (auto _ : state) {
    auto index = acsx::CompressedIndex::deserialize(bytes);
    benchmark::DoNotOptimize(index.edges());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(bytes.size()));
}
BENCHMARK(BM_Deserialize)->Unit(benchmark::kMillisecond);

}  // namespace
