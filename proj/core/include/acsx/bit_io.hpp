#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "acsx/error.hpp"

namespace acsx {

inline constexpr uint64_t low_mask(unsigned width) {
  return width >= 64 ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
}

// Bits needed to store any value in [0..max_value]; zero for max_value == 0.
inline constexpr unsigned bits_for(uint64_t max_value) {
  return static_cast<unsigned>(64 - std::countl_zero(max_value));
}

// Reads `width` (<= 64) bits starting at bit `pos`, LSB-first.
inline uint64_t read_bits(const uint64_t* words, uint64_t pos, unsigned width) {
  if (width == 0) return 0;
  const uint64_t w = pos >> 6;
  const unsigned off = static_cast<unsigned>(pos & 63);
  uint64_t value = words[w] >> off;
  if (off + width > 64) value |= words[w + 1] << (64 - off);
  return value & low_mask(width);
}

inline void write_bits(uint64_t* words, uint64_t pos, uint64_t value, unsigned width) {
  if (width == 0) return;
  value &= low_mask(width);
  const uint64_t w = pos >> 6;
  const unsigned off = static_cast<unsigned>(pos & 63);
  words[w] &= ~(low_mask(width) << off);
  words[w] |= value << off;
  if (off + width > 64) {
    const unsigned spill = off + width - 64;
    words[w + 1] &= ~low_mask(spill);
    words[w + 1] |= value >> (64 - off);
  }
}

inline bool read_bit(const uint64_t* words, uint64_t pos) {
  return (words[pos >> 6] >> (pos & 63)) & 1;
}

// Append-only bit stream. The serialized form of every index structure is
// produced through one of these so that reported sizes match written bits.
class BitWriter {
 public:
  void put(uint64_t value, unsigned width) {
    if (width == 0) return;
    if (((size_ + width + 63) >> 6) > words_.size()) words_.resize(((size_ + width + 63) >> 6) + 1, 0);
    write_bits(words_.data(), size_, value, width);
    size_ += width;
  }
  void put_bit(bool bit) { put(bit ? 1 : 0, 1); }
  void put_words(std::span<const uint64_t> src, uint64_t nbits) {
    uint64_t done = 0;
    for (size_t w = 0; done < nbits; ++w) {
      const unsigned take = static_cast<unsigned>(std::min<uint64_t>(64, nbits - done));
      put(src[w], take);
      done += take;
    }
  }
  uint64_t size() const { return size_; }
  // Backing words, with at least two zero words past the last written bit.
  std::vector<uint64_t> take_words() {
    words_.resize((size_ + 63) / 64 + 2, 0);
    size_ = 0;
    return std::move(words_);
  }
  std::vector<uint8_t> to_bytes() const {
    std::vector<uint8_t> out((size_ + 7) / 8);
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    return out;
  }

 private:
  std::vector<uint64_t> words_;
  uint64_t size_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const uint8_t> bytes) : size_(uint64_t{bytes.size()} * 8) {
    words_.assign((bytes.size() + 7) / 8 + 1, 0);
    for (size_t i = 0; i < bytes.size(); ++i) words_[i / 8] |= uint64_t{bytes[i]} << (8 * (i % 8));
  }
  uint64_t get(unsigned width) {
    require(width);
    const uint64_t v = read_bits(words_.data(), pos_, width);
    pos_ += width;
    return v;
  }
  bool get_bit() { return get(1) != 0; }
  std::vector<uint64_t> get_words(uint64_t nbits) {
    require(nbits);
    std::vector<uint64_t> out((nbits + 63) / 64 + 1, 0);
    uint64_t done = 0;
    for (size_t w = 0; done < nbits; ++w) {
      const unsigned take = static_cast<unsigned>(std::min<uint64_t>(64, nbits - done));
      out[w] = get(take);
      done += take;
    }
    return out;
  }
  uint64_t position() const { return pos_; }
  uint64_t remaining() const { return size_ - pos_; }

 private:
  void require(uint64_t width) const {
    if (pos_ + width > size_) throw Error(ErrorCode::kTruncated, "bit stream truncated");
  }
  std::vector<uint64_t> words_;
  uint64_t size_ = 0;
  uint64_t pos_ = 0;
};

}  // namespace acsx
