#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acsx/bit_io.hpp"
#include "acsx/int_vector.hpp"

namespace acsx {

enum class BitvectorEncoding : uint8_t {
  // 63-bit blocks stored as (class = popcount, offset = combinatorial rank
  // within the class), with superblock rank and offset-pointer directories.
  kClassOffset = 0,
  // Golomb-coded gaps between consecutive ones, with every K-th one sampled.
  kGapCoded = 1,
};

struct BitvectorOptions {
  enum class Policy : uint8_t { kAuto, kClassOffset, kGapCoded };
  // kAuto picks whichever encoding is smaller for the given input.
  Policy policy = Policy::kAuto;
  // Sampling period of the gap-coded encoding; must be a power of two.
  uint32_t gap_sample_rate = 32;
};

// Static bitvector with select and partial-rank support in space close to
// log C(n, m). Immutable after construction.
class CompressedBitvector {
 public:
  static constexpr unsigned kBlockBits = 63;
  static constexpr unsigned kBlocksPerSuperblock = 32;
  static constexpr uint64_t kHeaderBits = 64 + 64;

  CompressedBitvector() = default;

  // `positions` must be strictly increasing and < length.
  static CompressedBitvector from_positions(uint64_t length, std::span<const uint64_t> positions,
                                            const BitvectorOptions& options = {});

  uint64_t length() const { return length_; }
  uint64_t ones() const { return ones_; }
  BitvectorEncoding encoding() const { return encoding_; }

  bool access(uint64_t i) const { return partial_rank(i).has_value(); }

  // Number of ones in [0..i] when bit i is set, nullopt otherwise.
  std::optional<uint64_t> partial_rank(uint64_t i) const;
  // Number of ones in [0..i].
  uint64_t rank_all(uint64_t i) const;
  // Position of the j-th one, 1-based. Throws std::out_of_range unless 1 <= j <= ones().
  uint64_t select(uint64_t j) const;

  // Bits of the encoded sequence proper (classes + offsets, or the gap code stream).
  uint64_t payload_bits() const;
  // Bits of the query directories and encoding parameters.
  uint64_t directory_bits() const;
  uint64_t body_bits() const { return payload_bits() + directory_bits(); }
  // Standalone serialized size: header (length, ones) plus body.
  uint64_t size_in_bits() const { return kHeaderBits + body_bits(); }

  // Body-only form for containers that already know length and ones. The
  // body starts with the one-bit encoding flag, counted as directory.
  void write_body(BitWriter& out) const;
  static CompressedBitvector read_body(BitReader& in, uint64_t length, uint64_t ones);

  void write(BitWriter& out) const;
  static CompressedBitvector read(BitReader& in);

  // Size estimates used by the kAuto policy; exact for the encodings built.
  static uint64_t class_offset_body_bits(uint64_t length, std::span<const uint64_t> positions);
  static uint64_t gap_coded_body_bits(uint64_t length, std::span<const uint64_t> positions, uint32_t sample_rate,
                                      uint64_t* best_modulus = nullptr);

 private:
  struct ClassOffset {
    IntVector classes;         // 6 bits per 63-bit block
    std::vector<uint64_t> offsets = std::vector<uint64_t>(1, 0);
    uint64_t offset_bits = 0;
    IntVector sb_rank;         // ones before each superblock
    IntVector sb_pointer;      // offset-stream position of each superblock
  };
  struct GapCoded {
    uint64_t modulus = 1;      // Golomb parameter M
    unsigned log_sample = 5;   // K = 2^log_sample
    std::vector<uint64_t> stream = std::vector<uint64_t>(1, 0);
    uint64_t stream_bits = 0;
    IntVector sample_position;  // position of one #(sK + 1)
    IntVector sample_offset;    // stream offset just past that one's code
  };

  static CompressedBitvector build_class_offset(uint64_t length, std::span<const uint64_t> positions);
  static CompressedBitvector build_gap_coded(uint64_t length, std::span<const uint64_t> positions,
                                             uint32_t sample_rate, uint64_t modulus);

  // Class-offset helpers.
  // Block contents at positions <= limit.
  uint64_t block_bits(uint64_t block, uint64_t* ones_before, unsigned limit = kBlockBits - 1) const;
  std::optional<uint64_t> co_rank(uint64_t i, bool partial) const;
  uint64_t co_select(uint64_t j) const;

  // Gap-coded helpers.
  uint64_t decode_gap(uint64_t& offset) const;
  std::optional<uint64_t> gc_rank(uint64_t i, bool partial) const;
  uint64_t gc_select(uint64_t j) const;
  static uint64_t stream_bound(uint64_t length, uint64_t ones, uint64_t modulus);

  void check_index(uint64_t i) const;

  uint64_t length_ = 0;
  uint64_t ones_ = 0;
  BitvectorEncoding encoding_ = BitvectorEncoding::kGapCoded;
  ClassOffset co_;
  GapCoded gc_;
};

// Builds from an explicit bit sequence.
CompressedBitvector build_compressed(const std::vector<bool>& bits, const BitvectorOptions& options = {});

}  // namespace acsx
