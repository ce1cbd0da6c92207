#include "acsx/compressed_bitvector.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace acsx {
namespace {

constexpr unsigned kClassBits = 6;

struct BinomialTables {
  std::array<std::array<uint64_t, 64>, 64> choose{};
  std::array<unsigned, 64> offset_width{};

  BinomialTables() {
    for (unsigned n = 0; n < 64; ++n) {
      choose[n][0] = 1;
      for (unsigned k = 1; k <= n; ++k) choose[n][k] = choose[n - 1][k - 1] + (k <= n - 1 ? choose[n - 1][k] : 0);
    }
    for (unsigned k = 0; k <= CompressedBitvector::kBlockBits; ++k) {
      const uint64_t count = choose[CompressedBitvector::kBlockBits][k];
      offset_width[k] = count <= 1 ? 0 : bits_for(count - 1);
    }
  }
};

const BinomialTables& tables() {
  static const BinomialTables t;
  return t;
}

uint64_t encode_block(uint64_t bits, unsigned k) {
  const auto& c = tables().choose;
  uint64_t rank = 0;
  for (unsigned j = 0; k > 0 && j < CompressedBitvector::kBlockBits; ++j) {
    if ((bits >> j) & 1) {
      rank += c[CompressedBitvector::kBlockBits - 1 - j][k];
      --k;
    }
  }
  return rank;
}

// Decodes the ones of a block at positions <= limit, stopping after
// max_ones of them. A one sits at the smallest position p >= j with
// C(62 - p, k) <= rank, and that binomial is nonincreasing in p.
uint64_t decode_block(unsigned k, uint64_t rank, unsigned limit = CompressedBitvector::kBlockBits - 1,
                      unsigned max_ones = CompressedBitvector::kBlockBits) {
  constexpr unsigned kLast = CompressedBitvector::kBlockBits - 1;
  if (k == CompressedBitvector::kBlockBits) return low_mask(std::min(limit + 1, max_ones));
  const auto& c = tables().choose;
  uint64_t bits = 0;
  unsigned j = 0;
  for (; k > 0 && max_ones > 0; --k, --max_ones) {
    unsigned p = j;
    if (c[kLast - p][k] > rank) {
      unsigned hi = CompressedBitvector::kBlockBits - k;
      while (p < hi) {
        const unsigned mid = (p + hi) / 2;
        if (c[kLast - mid][k] <= rank) hi = mid; else p = mid + 1;
      }
    }
    if (p > limit) break;
    bits |= uint64_t{1} << p;
    rank -= c[kLast - p][k];
    j = p + 1;
  }
  return bits;
}

uint64_t golomb_code_bits(uint64_t gap, uint64_t modulus) {
  const uint64_t q = gap / modulus;
  if (modulus == 1) return q + 1;
  const unsigned b = bits_for(modulus - 1);
  const uint64_t u = (uint64_t{1} << b) - modulus;
  return q + 1 + ((gap % modulus) < u ? b - 1 : b);
}

void put_golomb(BitWriter& out, uint64_t gap, uint64_t modulus) {
  uint64_t q = gap / modulus;
  while (q >= 64) {
    out.put(~uint64_t{0}, 64);
    q -= 64;
  }
  out.put(low_mask(static_cast<unsigned>(q)), static_cast<unsigned>(q) + 1);
  if (modulus == 1) return;
  const unsigned b = bits_for(modulus - 1);
  const uint64_t u = (uint64_t{1} << b) - modulus;
  const uint64_t r = gap % modulus;
  if (r < u) {
    out.put(r, b - 1);
  } else {
    const uint64_t code = r + u;
    out.put(code >> 1, b - 1);
    out.put(code & 1, 1);
  }
}

// The modulus is stored minus one; it never exceeds max(1, length).
unsigned modulus_width(uint64_t length) { return bits_for(std::max<uint64_t>(1, length) - 1); }

uint64_t default_modulus(uint64_t length, uint64_t ones) {
  if (ones == 0 || length == 0) return 1;
  const double p = static_cast<double>(ones) / static_cast<double>(length);
  if (p >= 0.5) return 1;
  const double theta = 1.0 - p;
  const double m = std::ceil(std::log(1.0 + theta) / -std::log(theta));
  return std::max<uint64_t>(1, static_cast<uint64_t>(m));
}

uint64_t gap_stream_bits(uint64_t /*length*/, std::span<const uint64_t> positions, uint64_t modulus) {
  uint64_t total = 0;
  uint64_t prev = 0;
  bool first = true;
  for (uint64_t p : positions) {
    total += golomb_code_bits(first ? p : p - prev - 1, modulus);
    prev = p;
    first = false;
  }
  return total;
}

}  // namespace

void CompressedBitvector::check_index(uint64_t i) const {
  if (i >= length_) {
    throw std::out_of_range("bit index " + std::to_string(i) + " out of range for length " + std::to_string(length_));
  }
}

CompressedBitvector CompressedBitvector::from_positions(uint64_t length, std::span<const uint64_t> positions,
                                                        const BitvectorOptions& options) {
  using Policy = BitvectorOptions::Policy;
  if (!std::has_single_bit(options.gap_sample_rate) || options.gap_sample_rate > (1u << 30)) {
    throw std::invalid_argument("gap sample rate must be a power of two");
  }
  assert(positions.empty() || positions.back() < length);
  uint64_t modulus = 1;
  switch (options.policy) {
    case Policy::kClassOffset:
      return build_class_offset(length, positions);
    case Policy::kGapCoded:
      gap_coded_body_bits(length, positions, options.gap_sample_rate, &modulus);
      return build_gap_coded(length, positions, options.gap_sample_rate, modulus);
    case Policy::kAuto:
      break;
  }
  const uint64_t gap_bits = gap_coded_body_bits(length, positions, options.gap_sample_rate, &modulus);
  // The class stream alone costs 6 bits per block; skip the exact count when that already loses.
  // Ties go to class/offset.
  const uint64_t class_floor = kClassBits * ((length + kBlockBits - 1) / kBlockBits);
  if (class_floor <= gap_bits && class_offset_body_bits(length, positions) <= gap_bits) {
    return build_class_offset(length, positions);
  }
  return build_gap_coded(length, positions, options.gap_sample_rate, modulus);
}

uint64_t CompressedBitvector::class_offset_body_bits(uint64_t length, std::span<const uint64_t> positions) {
  const auto& t = tables();
  const uint64_t nblocks = (length + kBlockBits - 1) / kBlockBits;
  const uint64_t nsb = (nblocks + kBlocksPerSuperblock - 1) / kBlocksPerSuperblock;
  uint64_t offset_bits = 0;
  for (size_t i = 0; i < positions.size();) {
    const uint64_t block = positions[i] / kBlockBits;
    size_t j = i;
    while (j < positions.size() && positions[j] / kBlockBits == block) ++j;
    offset_bits += t.offset_width[j - i];
    i = j;
  }
  return 1 + kClassBits * nblocks + offset_bits + nsb * (bits_for(positions.size()) + bits_for(offset_bits));
}

uint64_t CompressedBitvector::stream_bound(uint64_t length, uint64_t ones, uint64_t modulus) {
  return length / modulus + ones * (1 + bits_for(modulus));
}

uint64_t CompressedBitvector::gap_coded_body_bits(uint64_t length, std::span<const uint64_t> positions,
                                                  uint32_t sample_rate, uint64_t* best_modulus) {
  const uint64_t ones = positions.size();
  const uint64_t m0 = default_modulus(length, ones);
  const uint64_t candidates[] = {m0 / 4, m0 / 2, m0 - 1, m0, m0 + 1, m0 * 2, m0 * 4};
  const uint64_t cap = std::max<uint64_t>(1, length);
  uint64_t best = ~uint64_t{0};
  uint64_t best_bits = 0;
  for (uint64_t m : candidates) {
    if (m < 1 || m > cap) continue;
    const uint64_t bits = gap_stream_bits(length, positions, m);
    if (bits < best_bits || best == ~uint64_t{0}) {
      best = m;
      best_bits = bits;
    }
  }
  if (best_modulus) *best_modulus = best;
  const uint64_t samples = (ones + sample_rate - 1) / sample_rate;
  return 1 + best_bits + modulus_width(length) + 5 + bits_for(stream_bound(length, ones, best)) +
         samples * (bits_for(length == 0 ? 0 : length - 1) + bits_for(best_bits));
}

CompressedBitvector CompressedBitvector::build_class_offset(uint64_t length, std::span<const uint64_t> positions) {
  const auto& t = tables();
  CompressedBitvector v;
  v.length_ = length;
  v.ones_ = positions.size();
  v.encoding_ = BitvectorEncoding::kClassOffset;
  const uint64_t nblocks = (length + kBlockBits - 1) / kBlockBits;
  const uint64_t nsb = (nblocks + kBlocksPerSuperblock - 1) / kBlocksPerSuperblock;
  v.co_.classes = IntVector(nblocks, kClassBits);

  BitWriter offsets;
  std::vector<uint64_t> sb_rank(nsb), sb_ptr(nsb);
  size_t next = 0;
  for (uint64_t block = 0; block < nblocks; ++block) {
    if (block % kBlocksPerSuperblock == 0) {
      sb_rank[block / kBlocksPerSuperblock] = next;
      sb_ptr[block / kBlocksPerSuperblock] = offsets.size();
    }
    uint64_t bits = 0;
    const uint64_t base = block * kBlockBits;
    while (next < positions.size() && positions[next] < base + kBlockBits) {
      bits |= uint64_t{1} << (positions[next] - base);
      ++next;
    }
    const unsigned k = static_cast<unsigned>(std::popcount(bits));
    v.co_.classes.set(block, k);
    offsets.put(encode_block(bits, k), t.offset_width[k]);
  }
  v.co_.offset_bits = offsets.size();
  v.co_.offsets = offsets.take_words();
  v.co_.sb_rank = IntVector(nsb, bits_for(v.ones_));
  v.co_.sb_pointer = IntVector(nsb, bits_for(v.co_.offset_bits));
  for (uint64_t s = 0; s < nsb; ++s) {
    v.co_.sb_rank.set(s, sb_rank[s]);
    v.co_.sb_pointer.set(s, sb_ptr[s]);
  }
  return v;
}

CompressedBitvector CompressedBitvector::build_gap_coded(uint64_t length, std::span<const uint64_t> positions,
                                                         uint32_t sample_rate, uint64_t modulus) {
  CompressedBitvector v;
  v.length_ = length;
  v.ones_ = positions.size();
  v.encoding_ = BitvectorEncoding::kGapCoded;
  v.gc_.modulus = modulus;
  v.gc_.log_sample = static_cast<unsigned>(std::countr_zero(sample_rate));
  const uint64_t samples = (v.ones_ + sample_rate - 1) / sample_rate;
  std::vector<uint64_t> offs(samples);
  BitWriter stream;
  uint64_t prev = 0;
  for (size_t i = 0; i < positions.size(); ++i) {
    put_golomb(stream, i == 0 ? positions[i] : positions[i] - prev - 1, modulus);
    prev = positions[i];
    if (i % sample_rate == 0) offs[i / sample_rate] = stream.size();
  }
  v.gc_.stream_bits = stream.size();
  v.gc_.stream = stream.take_words();
  v.gc_.sample_position = IntVector(samples, bits_for(length == 0 ? 0 : length - 1));
  v.gc_.sample_offset = IntVector(samples, bits_for(v.gc_.stream_bits));
  for (uint64_t s = 0; s < samples; ++s) {
    v.gc_.sample_position.set(s, positions[s * sample_rate]);
    v.gc_.sample_offset.set(s, offs[s]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Queries

std::optional<uint64_t> CompressedBitvector::partial_rank(uint64_t i) const {
  check_index(i);
  return encoding_ == BitvectorEncoding::kClassOffset ? co_rank(i, true) : gc_rank(i, true);
}

uint64_t CompressedBitvector::rank_all(uint64_t i) const {
  check_index(i);
  return *(encoding_ == BitvectorEncoding::kClassOffset ? co_rank(i, false) : gc_rank(i, false));
}

uint64_t CompressedBitvector::select(uint64_t j) const {
  if (j == 0 || j > ones_) {
    throw std::out_of_range("select ordinal " + std::to_string(j) + " outside [1.." + std::to_string(ones_) + "]");
  }
  return encoding_ == BitvectorEncoding::kClassOffset ? co_select(j) : gc_select(j);
}

uint64_t CompressedBitvector::block_bits(uint64_t block, uint64_t* ones_before, unsigned limit) const {
  const auto& width = tables().offset_width;
  const uint64_t sb = block / kBlocksPerSuperblock;
  uint64_t rank = co_.sb_rank[sb];
  uint64_t ptr = co_.sb_pointer[sb];
  for (uint64_t b = sb * kBlocksPerSuperblock; b < block; ++b) {
    const uint64_t k = co_.classes[b];
    rank += k;
    ptr += width[k];
  }
  *ones_before = rank;
  const unsigned k = static_cast<unsigned>(co_.classes[block]);
  return decode_block(k, read_bits(co_.offsets.data(), ptr, width[k]), limit);
}

std::optional<uint64_t> CompressedBitvector::co_rank(uint64_t i, bool partial) const {
  uint64_t before = 0;
  const unsigned bit = static_cast<unsigned>(i % kBlockBits);
  const uint64_t bits = block_bits(i / kBlockBits, &before, bit);
  if (partial && !((bits >> bit) & 1)) return std::nullopt;
  return before + static_cast<uint64_t>(std::popcount(bits & low_mask(bit + 1)));
}

uint64_t CompressedBitvector::co_select(uint64_t j) const {
  const auto& width = tables().offset_width;
  // Last superblock whose preceding-ones count is < j.
  uint64_t lo = 0, hi = co_.sb_rank.size();
  while (hi - lo > 1) {
    const uint64_t mid = (lo + hi) / 2;
    if (co_.sb_rank[mid] < j) lo = mid; else hi = mid;
  }
  uint64_t rank = co_.sb_rank[lo];
  uint64_t ptr = co_.sb_pointer[lo];
  for (uint64_t b = lo * kBlocksPerSuperblock;; ++b) {
    const unsigned k = static_cast<unsigned>(co_.classes[b]);
    if (rank + k >= j) {
      const unsigned n = static_cast<unsigned>(j - rank);
      const uint64_t bits = decode_block(k, read_bits(co_.offsets.data(), ptr, width[k]), kBlockBits - 1, n);
      return b * kBlockBits + (63 - static_cast<unsigned>(std::countl_zero(bits)));
    }
    rank += k;
    ptr += width[k];
  }
}

uint64_t CompressedBitvector::decode_gap(uint64_t& offset) const {
  const uint64_t* data = gc_.stream.data();
  uint64_t q = 0;
  for (;;) {
    const uint64_t word = read_bits(data, offset, 64);
    const unsigned run = static_cast<unsigned>(std::countr_one(word));
    if (run < 64) {
      q += run;
      offset += run + 1;
      break;
    }
    q += 64;
    offset += 64;
  }
  const uint64_t m = gc_.modulus;
  if (m == 1) return q;
  const unsigned b = bits_for(m - 1);
  const uint64_t u = (uint64_t{1} << b) - m;
  uint64_t r = read_bits(data, offset, b - 1);
  offset += b - 1;
  if (r >= u) {
    r = ((r << 1) | read_bits(data, offset, 1)) - u;
    offset += 1;
  }
  return q * m + r;
}

std::optional<uint64_t> CompressedBitvector::gc_rank(uint64_t i, bool partial) const {
  const uint64_t samples = gc_.sample_position.size();
  if (samples == 0 || gc_.sample_position[0] > i) {
    if (partial) return std::nullopt;
    return 0;
  }
  uint64_t lo = 0, hi = samples;
  while (hi - lo > 1) {
    const uint64_t mid = (lo + hi) / 2;
    if (gc_.sample_position[mid] <= i) lo = mid; else hi = mid;
  }
  uint64_t cur = gc_.sample_position[lo];
  uint64_t rank = (lo << gc_.log_sample) + 1;
  uint64_t offset = gc_.sample_offset[lo];
  while (cur < i && rank < ones_) {
    const uint64_t next = cur + decode_gap(offset) + 1;
    if (next > i) break;
    cur = next;
    ++rank;
  }
  if (partial && cur != i) return std::nullopt;
  return rank;
}

uint64_t CompressedBitvector::gc_select(uint64_t j) const {
  const uint64_t s = (j - 1) >> gc_.log_sample;
  uint64_t pos = gc_.sample_position[s];
  uint64_t offset = gc_.sample_offset[s];
  for (uint64_t left = (j - 1) & low_mask(gc_.log_sample); left > 0; --left) pos += decode_gap(offset) + 1;
  return pos;
}

// ---------------------------------------------------------------------------
// Accounting and serialization

uint64_t CompressedBitvector::payload_bits() const {
  if (encoding_ == BitvectorEncoding::kClassOffset) return co_.classes.bits() + co_.offset_bits;
  return gc_.stream_bits;
}

uint64_t CompressedBitvector::directory_bits() const {
  if (encoding_ == BitvectorEncoding::kClassOffset) return 1 + co_.sb_rank.bits() + co_.sb_pointer.bits();
  return 1 + modulus_width(length_) + 5 + bits_for(stream_bound(length_, ones_, gc_.modulus)) + gc_.sample_position.bits() +
         gc_.sample_offset.bits();
}

void CompressedBitvector::write_body(BitWriter& out) const {
  out.put_bit(encoding_ == BitvectorEncoding::kGapCoded);
  if (encoding_ == BitvectorEncoding::kClassOffset) {
    co_.classes.write(out);
    out.put_words(co_.offsets, co_.offset_bits);
    co_.sb_rank.write(out);
    co_.sb_pointer.write(out);
    return;
  }
  out.put(gc_.modulus - 1, modulus_width(length_));
  out.put(gc_.log_sample, 5);
  out.put(gc_.stream_bits, bits_for(stream_bound(length_, ones_, gc_.modulus)));
  out.put_words(gc_.stream, gc_.stream_bits);
  gc_.sample_position.write(out);
  gc_.sample_offset.write(out);
}

CompressedBitvector CompressedBitvector::read_body(BitReader& in, uint64_t length, uint64_t ones) {
  CompressedBitvector v;
  v.length_ = length;
  v.ones_ = ones;
  v.encoding_ = in.get_bit() ? BitvectorEncoding::kGapCoded : BitvectorEncoding::kClassOffset;
  if (v.encoding_ == BitvectorEncoding::kClassOffset) {
    const auto& width = tables().offset_width;
    const uint64_t nblocks = (length + kBlockBits - 1) / kBlockBits;
    const uint64_t nsb = (nblocks + kBlocksPerSuperblock - 1) / kBlocksPerSuperblock;
    v.co_.classes = IntVector::read(in, nblocks, kClassBits);
    uint64_t total_ones = 0;
    for (uint64_t b = 0; b < nblocks; ++b) {
      const uint64_t k = v.co_.classes[b];
      if (k > kBlockBits) throw Error(ErrorCode::kCorrupt, "invalid block class");
      v.co_.offset_bits += width[k];
      total_ones += k;
    }
    if (total_ones != ones) throw Error(ErrorCode::kCorrupt, "bitvector ones mismatch");
    v.co_.offsets = in.get_words(v.co_.offset_bits);
    v.co_.offsets.push_back(0);
    v.co_.sb_rank = IntVector::read(in, nsb, bits_for(ones));
    v.co_.sb_pointer = IntVector::read(in, nsb, bits_for(v.co_.offset_bits));
    return v;
  }
  v.gc_.modulus = in.get(modulus_width(length)) + 1;
  v.gc_.log_sample = static_cast<unsigned>(in.get(5));
  if (v.gc_.log_sample > 30) throw Error(ErrorCode::kCorrupt, "invalid sample rate");
  v.gc_.stream_bits = in.get(bits_for(stream_bound(length, ones, v.gc_.modulus)));
  v.gc_.stream = in.get_words(v.gc_.stream_bits);
  v.gc_.stream.push_back(0);
  const uint64_t samples = (ones + (uint64_t{1} << v.gc_.log_sample) - 1) >> v.gc_.log_sample;
  v.gc_.sample_position = IntVector::read(in, samples, bits_for(length == 0 ? 0 : length - 1));
  v.gc_.sample_offset = IntVector::read(in, samples, bits_for(v.gc_.stream_bits));
  return v;
}

void CompressedBitvector::write(BitWriter& out) const {
  out.put(length_, 64);
  out.put(ones_, 64);
  write_body(out);
}

CompressedBitvector CompressedBitvector::read(BitReader& in) {
  const uint64_t length = in.get(64);
  const uint64_t ones = in.get(64);
  if (ones > length) throw Error(ErrorCode::kCorrupt, "bitvector has more ones than bits");
  return read_body(in, length, ones);
}

CompressedBitvector build_compressed(const std::vector<bool>& bits, const BitvectorOptions& options) {
  std::vector<uint64_t> positions;
  for (uint64_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) positions.push_back(i);
  }
  return CompressedBitvector::from_positions(bits.size(), positions, options);
}

}  // namespace acsx
