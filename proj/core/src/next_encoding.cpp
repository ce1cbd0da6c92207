#include "acsx/next_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acsx/error.hpp"

namespace acsx {

uint64_t default_block_size(uint64_t m, uint32_t sigma) {
  const double lg = m > 1 ? std::log2(static_cast<double>(m)) : 0.0;
  const uint64_t squared = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(lg * lg)));
  return uint64_t{std::max<uint32_t>(sigma, 1)} * squared;
}

uint64_t NextEncoding::block_start(uint64_t block) const {
  if (layout_ == NextLayout::kMonolithic) return 0;
  return (block / blocks_per_letter_) * (m_ + 1) + (block % blocks_per_letter_) * block_size_;
}

NextEncoding NextEncoding::build(uint64_t m, uint32_t sigma, std::span<const uint64_t> positions, NextLayout layout,
                                 uint64_t block_size, const BitvectorOptions& options) {
  if (sigma == 0) throw Error(ErrorCode::kInvalidArgument, "alphabet size must be positive");
  if (positions.size() != m) throw Error(ErrorCode::kInvalidArgument, "transition array must hold m ones");
  NextEncoding enc;
  enc.layout_ = layout;
  enc.m_ = m;
  enc.sigma_ = sigma;
  const uint64_t row = m + 1;
  if (layout == NextLayout::kMonolithic) {
    enc.block_size_ = row * sigma;
    enc.blocks_per_letter_ = 1;
    enc.blocks_.push_back(CompressedBitvector::from_positions(row * sigma, positions, options));
    enc.ones_before_ = IntVector(1, bits_for(m));
    enc.body_offset_ = IntVector(1, 0);
    enc.body_bits_ = enc.blocks_[0].body_bits();
    return enc;
  }
  enc.block_size_ = std::max<uint64_t>(1, block_size);
  enc.blocks_per_letter_ = (row + enc.block_size_ - 1) / enc.block_size_;
  const uint64_t nblocks = enc.blocks_per_letter_ * sigma;
  enc.blocks_.reserve(nblocks);
  enc.ones_before_ = IntVector(nblocks, bits_for(m));
  std::vector<uint64_t> local;
  size_t next = 0;
  for (uint64_t g = 0; g < nblocks; ++g) {
    const uint64_t start = enc.block_start(g);
    const uint64_t len = std::min(enc.block_size_, row - (g % enc.blocks_per_letter_) * enc.block_size_);
    enc.ones_before_.set(g, next);
    local.clear();
    while (next < positions.size() && positions[next] < start + len) local.push_back(positions[next++] - start);
    enc.blocks_.push_back(CompressedBitvector::from_positions(len, local, options));
  }
  enc.build_unary_directory(options);
  return enc;
}

void NextEncoding::build_unary_directory(const BitvectorOptions& options) {
  const uint64_t nblocks = blocks_.size();
  for (const auto& b : blocks_) body_bits_ += b.body_bits();
  body_offset_ = IntVector(nblocks, bits_for(body_bits_));
  uint64_t offset = 0;
  std::vector<uint64_t> unary;
  unary.reserve(m_);
  uint64_t cursor = 0;
  for (uint64_t g = 0; g < nblocks; ++g) {
    body_offset_.set(g, offset);
    offset += blocks_[g].body_bits();
    for (uint64_t k = 0; k < blocks_[g].ones(); ++k) unary.push_back(cursor++);
    ++cursor;
  }
  unary_counts_ = CompressedBitvector::from_positions(cursor, unary, options);
}

std::optional<uint64_t> NextEncoding::partial_rank(uint64_t g) const {
  if (layout_ == NextLayout::kMonolithic) return blocks_[0].partial_rank(g);
  const uint64_t row = m_ + 1;
  const uint64_t letter = g / row;
  const uint64_t p = g % row;
  if (letter >= sigma_) throw std::out_of_range("transition position out of range");
  const uint64_t block = letter * blocks_per_letter_ + p / block_size_;
  const auto r = blocks_[block].partial_rank(p % block_size_);
  if (!r) return std::nullopt;
  return ones_before_[block] + *r;
}

uint64_t NextEncoding::select(uint64_t j) const {
  if (layout_ == NextLayout::kMonolithic) return blocks_[0].select(j);
  if (j == 0 || j > m_) throw std::out_of_range("transition ordinal out of range");
  const uint64_t block = unary_counts_.select(j) - (j - 1);
  return block_start(block) + blocks_[block].select(j - ones_before_[block]);
}

uint64_t NextEncoding::payload_bits() const {
  uint64_t total = 0;
  for (const auto& b : blocks_) total += b.payload_bits();
  return total;
}

uint64_t NextEncoding::directory_bits() const {
  uint64_t total = 0;
  for (const auto& b : blocks_) total += b.directory_bits();
  if (layout_ == NextLayout::kMonolithic) return total;
  return total + 64 + ones_before_.bits() + body_offset_.bits() + unary_counts_.body_bits();
}

void NextEncoding::write(BitWriter& out) const {
  if (layout_ == NextLayout::kMonolithic) {
    blocks_[0].write_body(out);
    return;
  }
  out.put(body_bits_, 64);
  ones_before_.write(out);
  body_offset_.write(out);
  unary_counts_.write_body(out);
  for (const auto& b : blocks_) b.write_body(out);
}

NextEncoding NextEncoding::read(BitReader& in, uint64_t m, uint32_t sigma, NextLayout layout, uint64_t block_size) {
  NextEncoding enc;
  enc.layout_ = layout;
  enc.m_ = m;
  enc.sigma_ = sigma;
  const uint64_t row = m + 1;
  if (layout == NextLayout::kMonolithic) {
    enc.block_size_ = row * sigma;
    enc.blocks_.push_back(CompressedBitvector::read_body(in, row * sigma, m));
    enc.ones_before_ = IntVector(1, bits_for(m));
    enc.body_offset_ = IntVector(1, 0);
    enc.body_bits_ = enc.blocks_[0].body_bits();
    return enc;
  }
  if (block_size == 0) throw Error(ErrorCode::kCorrupt, "block size must be positive");
  enc.block_size_ = block_size;
  enc.blocks_per_letter_ = (row + block_size - 1) / block_size;
  const uint64_t nblocks = enc.blocks_per_letter_ * sigma;
  enc.body_bits_ = in.get(64);
  enc.ones_before_ = IntVector::read(in, nblocks, bits_for(m));
  enc.body_offset_ = IntVector::read(in, nblocks, bits_for(enc.body_bits_));
  enc.unary_counts_ = CompressedBitvector::read_body(in, m + nblocks, m);
  const uint64_t body_start = in.position();
  enc.blocks_.reserve(nblocks);
  for (uint64_t g = 0; g < nblocks; ++g) {
    const uint64_t before = enc.ones_before_[g];
    const uint64_t after = g + 1 < nblocks ? enc.ones_before_[g + 1] : m;
    if (after < before || after > m) throw Error(ErrorCode::kCorrupt, "block rank directory not monotone");
    if (in.position() - body_start != enc.body_offset_[g]) throw Error(ErrorCode::kCorrupt, "block offset mismatch");
    const uint64_t len = std::min(block_size, row - (g % enc.blocks_per_letter_) * block_size);
    enc.blocks_.push_back(CompressedBitvector::read_body(in, len, after - before));
  }
  if (in.position() - body_start != enc.body_bits_) throw Error(ErrorCode::kCorrupt, "block bodies size mismatch");
  return enc;
}

}  // namespace acsx
