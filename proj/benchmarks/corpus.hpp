#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "acsx/compressed_index.hpp"

namespace acsx_bench {

// Deterministic inputs shared by the suites so numbers are comparable run to run.
inline std::vector<std::string> dna_patterns(size_t count, size_t min_len, size_t max_len, uint64_t seed) {
  static constexpr char kBases[] = "ACGT";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> len(min_len, max_len);
  std::vector<std::string> out(count);
  for (auto& p : out) {
    p.resize(len(rng));
    for (auto& ch : p) ch = kBases[rng() & 3];
  }
  return out;
}

inline std::string dna_text(size_t bytes, uint64_t seed) {
  static constexpr char kBases[] = "ACGT";
  std::mt19937_64 rng(seed);
  std::string out(bytes, 'A');
  for (auto& ch : out) ch = kBases[rng() & 3];
  return out;
}

inline std::vector<uint64_t> random_positions(uint64_t length, double density, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<uint64_t> out;
  for (uint64_t i = 0; i < length; ++i)
    if (coin(rng)) out.push_back(i);
  return out;
}

}  // namespace acsx_bench
