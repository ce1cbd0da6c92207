#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acsx/compressed_bitvector.hpp"
#include "acsx/int_vector.hpp"

namespace acsx {

enum class NextLayout : uint8_t {
  // Each letter's row of length m+1 is cut into blocks of b positions, each
  // block compressed on its own.
  kBlocked = 0,
  // One compressed bitvector over the whole concatenated transition array.
  kMonolithic = 1,
};

// Transition array B = B_0 B_1 ... B_{sigma-1}, each row of length m+1, with
// one set bit per trie edge at (label * (m+1) + parent num).
class NextEncoding {
 public:
  NextEncoding() = default;

  // `positions` are the set global positions of B, strictly increasing.
  static NextEncoding build(uint64_t m, uint32_t sigma, std::span<const uint64_t> positions, NextLayout layout,
                            uint64_t block_size, const BitvectorOptions& options = {});

  // Number of ones in B[0..g] when B[g] = 1, nullopt otherwise.
  std::optional<uint64_t> partial_rank(uint64_t g) const;
  // Global position of the j-th one (1-based).
  uint64_t select(uint64_t j) const;

  NextLayout layout() const { return layout_; }
  uint64_t edges() const { return m_; }
  uint32_t sigma() const { return sigma_; }
  uint64_t block_size() const { return block_size_; }
  uint64_t blocks_per_letter() const { return blocks_per_letter_; }
  uint64_t block_count() const { return blocks_.size(); }
  uint64_t block_length(uint64_t block) const { return blocks_[block].length(); }
  uint64_t block_ones(uint64_t block) const { return blocks_[block].ones(); }

  // Encoded sequence bits summed over blocks.
  uint64_t payload_bits() const;
  uint64_t directory_bits() const;
  uint64_t size_in_bits() const { return payload_bits() + directory_bits(); }

  void write(BitWriter& out) const;
  static NextEncoding read(BitReader& in, uint64_t m, uint32_t sigma, NextLayout layout, uint64_t block_size);

 private:
  void build_unary_directory(const BitvectorOptions& options);
  uint64_t block_start(uint64_t block) const;

  NextLayout layout_ = NextLayout::kBlocked;
  uint64_t m_ = 0;
  uint32_t sigma_ = 0;
  uint64_t block_size_ = 1;
  uint64_t blocks_per_letter_ = 1;
  std::vector<CompressedBitvector> blocks_;
  // Ones before each block in B.
  IntVector ones_before_;
  // Bit offset of each block body within the serialized body stream.
  IntVector body_offset_;
  uint64_t body_bits_ = 0;
  // Per-block one counts in unary: 1^{n_g} 0 for every block g in order.
  CompressedBitvector unary_counts_;
};

// Default block length: sigma * ceil(log2(m)^2), at least sigma.
uint64_t default_block_size(uint64_t m, uint32_t sigma);

}  // namespace acsx
