#pragma once

#include <cstdint>
#include <vector>

#include "acsx/bit_io.hpp"

namespace acsx {

// Fixed-width packed integer array.
class IntVector {
 public:
  IntVector() = default;
  IntVector(uint64_t size, unsigned width) : size_(size), width_(width), words_((size * width + 63) / 64 + 1, 0) {}

  uint64_t operator[](uint64_t i) const { return read_bits(words_.data(), i * width_, width_); }
  void set(uint64_t i, uint64_t value) { write_bits(words_.data(), i * width_, value, width_); }

  uint64_t size() const { return size_; }
  unsigned width() const { return width_; }
  uint64_t bits() const { return size_ * width_; }

  // Length and width are supplied by the caller's context on read.
  void write(BitWriter& out) const { out.put_words(words_, bits()); }
  static IntVector read(BitReader& in, uint64_t size, unsigned width) {
    IntVector v;
    v.size_ = size;
    v.width_ = width;
    v.words_ = in.get_words(size * width);
    return v;
  }

 private:
  uint64_t size_ = 0;
  unsigned width_ = 0;
  std::vector<uint64_t> words_ = std::vector<uint64_t>(1, 0);
};

}  // namespace acsx
