#include "acsx/compressed_index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

#include "acsx/error.hpp"

namespace acsx {

// ---------------------------------------------------------------------------
// Dense subset and sparse failure links

DenseSubset choose_dense_subset(const Trie& trie, uint32_t t) {
  if (t < 1) throw Error(ErrorCode::kInvalidArgument, "t must be at least 1");
  std::vector<uint64_t> class_size(t, 0);
  for (uint32_t v = 0; v < trie.vertex_count(); ++v) ++class_size[trie.depth(v) % t];
  DenseSubset subset;
  subset.t = t;
  subset.residue = static_cast<uint32_t>(std::min_element(class_size.begin(), class_size.end()) - class_size.begin());
  for (uint32_t n = 0; n < trie.vertex_count(); ++n) {
    const uint32_t v = trie.by_num(n);
    if (v == Trie::kRoot || trie.depth(v) % t == subset.residue) subset.nums.push_back(n);
  }
  return subset;
}

std::vector<uint32_t> transformed_failure_tree(const Trie& trie, const DenseSubset& subset) {
  const uint32_t n = trie.vertex_count();
  std::vector<uint32_t> failure_by_num(n, kNoVertex);
  for (uint32_t v = 1; v < n; ++v) failure_by_num[trie.num(v)] = trie.num(trie.failure(v));
  std::vector<bool> member(n, false), important(n, false);
  important[0] = true;
  for (uint32_t w : subset.nums) {
    member[w] = true;
    if (w != 0) important[failure_by_num[w]] = true;
  }
  // nearest[u]: nearest important ancestor-or-self of u in the failure tree.
  // Ancestors carry smaller numbers, so one increasing pass suffices.
  std::vector<uint32_t> nearest(n, 0);
  std::vector<uint32_t> parent(n, kNoVertex);
  for (uint32_t u = 1; u < n; ++u) {
    const uint32_t above = nearest[failure_by_num[u]];
    nearest[u] = important[u] ? u : above;
    if (member[u] || important[u]) parent[u] = above;
  }
  return parent;
}

SparseFailure encode_sparse_failure(const Trie& trie, const DenseSubset& subset, const BitvectorOptions& options) {
  SparseFailure f;
  f.t_ = subset.t;
  std::vector<uint64_t> members(subset.nums.begin(), subset.nums.end());
  f.members_ = CompressedBitvector::from_positions(trie.vertex_count(), members, options);
  const std::vector<uint32_t> parent = transformed_failure_tree(trie, subset);
  f.tree_ = SparseParentTree::build(parent, options);
  return f;
}

std::optional<uint32_t> SparseFailure::parent(uint32_t v) const {
  if (v == 0 || !members_.access(v)) return std::nullopt;
  return tree_.parent(v);
}

void SparseFailure::write(BitWriter& out) const {
  out.put(members_.ones(), 64);
  members_.write_body(out);
  tree_.write(out);
}

SparseFailure SparseFailure::read(BitReader& in, uint64_t universe, uint32_t t) {
  SparseFailure f;
  f.t_ = t;
  const uint64_t ones = in.get(64);
  if (ones > universe) throw Error(ErrorCode::kCorrupt, "dense subset larger than the trie");
  f.members_ = CompressedBitvector::read_body(in, universe, ones);
  f.tree_ = SparseParentTree::read(in, universe);
  return f;
}

// ---------------------------------------------------------------------------
// Pattern table

PatternTable PatternTable::build(const std::vector<std::vector<uint32_t>>& ids_by_vertex,
                                 const std::vector<uint32_t>& length_by_vertex, uint64_t pattern_count) {
  PatternTable table;
  table.ids_ = IntVector(pattern_count, bits_for(pattern_count == 0 ? 0 : pattern_count - 1));
  std::vector<uint64_t> starts;
  uint64_t slot = 0;
  for (const auto& ids : ids_by_vertex) {
    starts.push_back(slot);
    if (ids.size() > 1) table.shared_ = true;
    for (uint32_t id : ids) table.ids_.set(slot++, id);
  }
  if (slot != pattern_count) throw Error(ErrorCode::kInvalidArgument, "pattern ids do not cover every pattern");
  if (table.shared_) table.group_starts_ = CompressedBitvector::from_positions(pattern_count, starts);
  uint64_t lo = ~uint64_t{0}, hi = 0;
  for (uint32_t len : length_by_vertex) {
    lo = std::min<uint64_t>(lo, len);
    hi = std::max<uint64_t>(hi, len);
  }
  if (length_by_vertex.empty()) lo = hi = 0;
  table.length_base_ = lo;
  table.lengths_ = IntVector(length_by_vertex.size(), bits_for(hi - lo));
  for (size_t i = 0; i < length_by_vertex.size(); ++i) table.lengths_.set(i, length_by_vertex[i] - lo);
  return table;
}

std::pair<uint64_t, uint64_t> PatternTable::range(uint64_t ordinal) const {
  if (!shared_) return {ordinal - 1, ordinal};
  const uint64_t first = group_starts_.select(ordinal);
  const uint64_t last = ordinal < group_starts_.ones() ? group_starts_.select(ordinal + 1) : ids_.size();
  return {first, last};
}

uint64_t PatternTable::size_in_bits() const {
  return 64 + 64 + 1 + ids_.bits() + (shared_ ? group_starts_.body_bits() : 0) + 32 + 6 + lengths_.bits();
}

void PatternTable::write(BitWriter& out) const {
  out.put(ids_.size(), 64);
  out.put(lengths_.size(), 64);
  out.put_bit(shared_);
  ids_.write(out);
  if (shared_) group_starts_.write_body(out);
  out.put(length_base_, 32);
  out.put(lengths_.width(), 6);
  lengths_.write(out);
}

PatternTable PatternTable::read(BitReader& in) {
  PatternTable table;
  const uint64_t patterns = in.get(64);
  const uint64_t vertices = in.get(64);
  if (vertices > patterns) throw Error(ErrorCode::kCorrupt, "more marked vertices than patterns");
  if (patterns > in.remaining()) throw Error(ErrorCode::kTruncated, "pattern table truncated");
  table.shared_ = in.get_bit();
  if (!table.shared_ && vertices != patterns) throw Error(ErrorCode::kCorrupt, "pattern table group mismatch");
  table.ids_ = IntVector::read(in, patterns, bits_for(patterns == 0 ? 0 : patterns - 1));
  if (table.shared_) table.group_starts_ = CompressedBitvector::read_body(in, patterns, vertices);
  table.length_base_ = in.get(32);
  const unsigned width = static_cast<unsigned>(in.get(6));
  table.lengths_ = IntVector::read(in, vertices, width);
  return table;
}

// ---------------------------------------------------------------------------
// Index

CompressedIndex CompressedIndex::encode(const Trie& trie, const IndexConfig& config) {
  if (config.t < 1) throw Error(ErrorCode::kInvalidArgument, "t must be at least 1");
  if (!trie.numbered() || !trie.has_failure() || !trie.has_report()) {
    throw Error(ErrorCode::kInvalidArgument, "trie lacks numbering or links");
  }
  CompressedIndex index;
  index.m_ = trie.edge_count();
  index.sigma_ = trie.sigma();
  index.byte_alphabet_ = false;
  index.alphabet_ = identity_alphabet_map(trie.sigma());
  const uint64_t row = index.m_ + 1;
  const uint32_t n = trie.vertex_count();

  std::vector<uint64_t> positions;
  positions.reserve(index.m_);
  for (uint32_t v = 1; v < n; ++v) positions.push_back(uint64_t{trie.label(v)} * row + trie.num(trie.parent(v)));
  std::sort(positions.begin(), positions.end());
  const uint64_t block = config.block_size.value_or(default_block_size(index.m_, index.sigma_));
  index.next_ = NextEncoding::build(index.m_, index.sigma_, positions, config.layout, block, config.bitvectors);

  std::vector<uint64_t> marked;
  std::vector<std::vector<uint32_t>> ids;
  std::vector<uint32_t> lengths;
  std::vector<uint32_t> report_by_num(n, kNoVertex);
  for (uint32_t num = 0; num < n; ++num) {
    const uint32_t v = trie.by_num(num);
    if (trie.marked(v)) {
      marked.push_back(num);
      ids.push_back(trie.pattern_ids(v));
      lengths.push_back(trie.depth(v));
    }
    if (num != 0) report_by_num[num] = trie.num(trie.report(v));
  }
  index.mark_ = CompressedBitvector::from_positions(n, marked, config.bitvectors);
  index.patterns_ = PatternTable::build(ids, lengths, trie.pattern_count());

  const DenseSubset subset = choose_dense_subset(trie, config.t);
  index.residue_ = subset.residue;
  index.failure_ = encode_sparse_failure(trie, subset, config.bitvectors);
  index.report_ = SparseParentTree::build(report_by_num, config.bitvectors);
  return index;
}

CompressedIndex build_index(const Dictionary& dict, const IndexConfig& config) {
  CompressedIndex index = CompressedIndex::encode(build_full_trie(dict), config);
  index.byte_alphabet_ = dict.byte_alphabet();
  index.alphabet_ = dict.alphabet_map();
  return index;
}

std::optional<uint32_t> CompressedIndex::next(uint32_t v, Symbol c) const {
  if (v > m_ || c >= sigma_) throw std::out_of_range("vertex or letter out of range");
  const auto r = next_.partial_rank(uint64_t{c} * (m_ + 1) + v);
  if (!r) return std::nullopt;
  return static_cast<uint32_t>(*r);
}

std::pair<uint32_t, Symbol> CompressedIndex::parent_edge(uint32_t v) const {
  if (v == 0 || v > m_) throw std::out_of_range("parent_edge requires a non-root vertex");
  const uint64_t x = next_.select(v);
  return {static_cast<uint32_t>(x % (m_ + 1)), static_cast<Symbol>(x / (m_ + 1))};
}

uint32_t CompressedIndex::report_parent(uint32_t v) const {
  if (v == 0) return 0;
  return report_.parent(v);
}

std::vector<uint32_t> CompressedIndex::pattern_ids_at(uint32_t v) const {
  std::vector<uint32_t> out;
  const auto ordinal = mark_.partial_rank(v);
  if (!ordinal) return out;
  const auto [first, last] = patterns_.range(*ordinal);
  for (uint64_t s = first; s < last; ++s) out.push_back(patterns_.id(s));
  return out;
}

// META layout: m(64) sigma(32) t(32) residue(32) block_size(64) layout(8)
// byte_alphabet(1) and, for byte alphabets, 256 entries of 9 bits holding the
// symbol or 256 for unused bytes.
uint64_t CompressedIndex::meta_bits() const { return 64 + 32 + 32 + 32 + 64 + 8 + 1 + (byte_alphabet_ ? 256 * 9 : 0); }

void CompressedIndex::write_meta(BitWriter& out) const {
  out.put(m_, 64);
  out.put(sigma_, 32);
  out.put(failure_.t(), 32);
  out.put(residue_, 32);
  out.put(next_.block_size(), 64);
  out.put(static_cast<uint64_t>(next_.layout()), 8);
  out.put_bit(byte_alphabet_);
  if (byte_alphabet_) {
    for (Symbol s : alphabet_) out.put(s == kNoSymbol ? 256 : s, 9);
  }
}

IndexSizes CompressedIndex::sizes() const {
  IndexSizes s;
  s.meta = meta_bits();
  s.next_payload = next_.payload_bits();
  s.next_directory = next_.directory_bits();
  s.mark = mark_.body_bits();
  s.fail_membership = failure_.membership_bits();
  s.fail_tree = failure_.tree_bits();
  s.report_tree = report_.size_in_bits();
  s.pattern_table = patterns_.size_in_bits();
  return s;
}

namespace {

constexpr char kMagic[4] = {'A', 'C', 'S', 'X'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
uint64_t get_le(std::span<const uint8_t> bytes, size_t at, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= uint64_t{bytes[at + i]} << (8 * i);
  return v;
}

void put_section(std::vector<uint8_t>& out, const char (&tag)[5], const BitWriter& body) {
  out.insert(out.end(), tag, tag + 4);
  const std::vector<uint8_t> bytes = body.to_bytes();
  put_u64(out, bytes.size());
  out.insert(out.end(), bytes.begin(), bytes.end());
}

// A section reader must consume its bytes up to the final padding.
void expect_consumed(const BitReader& in, const char* tag) {
  if (in.remaining() >= 8) throw Error(ErrorCode::kCorrupt, std::string("trailing data in section ") + tag);
}

}  // namespace

std::vector<uint8_t> CompressedIndex::serialize() const {
  std::vector<uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, kIndexFormatVersion);
  BitWriter meta, next, mark, fail, rept, ptab;
  write_meta(meta);
  next_.write(next);
  mark_.write_body(mark);
  failure_.write(fail);
  report_.write(rept);
  patterns_.write(ptab);
  put_section(out, "META", meta);
  put_section(out, "NEXT", next);
  put_section(out, "MARK", mark);
  put_section(out, "FAIL", fail);
  put_section(out, "REPT", rept);
  put_section(out, "PTAB", ptab);
  return out;
}

CompressedIndex CompressedIndex::deserialize(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an ACSX index file");
  }
  if (bytes.size() < 8) throw Error(ErrorCode::kTruncated, "index header truncated");
  const uint32_t version = static_cast<uint32_t>(get_le(bytes, 4, 4));
  if (version != kIndexFormatVersion) {
    throw Error(ErrorCode::kBadMagic, "unsupported index format version " + std::to_string(version));
  }
  std::map<std::string, std::span<const uint8_t>> sections;
  size_t at = 8;
  while (at < bytes.size()) {
    if (bytes.size() - at < 12) throw Error(ErrorCode::kTruncated, "section header truncated");
    const std::string tag(reinterpret_cast<const char*>(bytes.data() + at), 4);
    const uint64_t len = get_le(bytes, at + 4, 8);
    at += 12;
    if (len > bytes.size() - at) throw Error(ErrorCode::kTruncated, "section " + tag + " truncated");
    sections[tag] = bytes.subspan(at, len);
    at += len;
  }
  for (const char* tag : {"META", "NEXT", "MARK", "FAIL", "REPT", "PTAB"}) {
    if (!sections.count(tag)) throw Error(ErrorCode::kTruncated, std::string("missing section ") + tag);
  }

  CompressedIndex index;
  uint32_t t = 1;
  uint64_t block_size = 1;
  NextLayout layout = NextLayout::kBlocked;
  {
    BitReader in(sections["META"]);
    index.m_ = in.get(64);
    index.sigma_ = static_cast<uint32_t>(in.get(32));
    t = static_cast<uint32_t>(in.get(32));
    index.residue_ = static_cast<uint32_t>(in.get(32));
    block_size = in.get(64);
    const uint64_t raw_layout = in.get(8);
    if (raw_layout > 1) throw Error(ErrorCode::kCorrupt, "unknown next layout");
    layout = static_cast<NextLayout>(raw_layout);
    index.byte_alphabet_ = in.get_bit();
    if (index.byte_alphabet_) {
      for (Symbol& s : index.alphabet_) {
        const uint64_t v = in.get(9);
        if (v > 256 || (v < 256 && v >= index.sigma_)) throw Error(ErrorCode::kCorrupt, "bad alphabet map");
        s = v == 256 ? kNoSymbol : static_cast<Symbol>(v);
      }
    } else {
      index.alphabet_ = identity_alphabet_map(index.sigma_);
    }
    expect_consumed(in, "META");
    if (index.m_ == 0 || index.m_ >= kNoVertex || index.sigma_ == 0 || t == 0) {
      throw Error(ErrorCode::kCorrupt, "index parameters out of range");
    }
  }
  const uint64_t n = index.m_ + 1;
  {
    BitReader in(sections["NEXT"]);
    index.next_ = NextEncoding::read(in, index.m_, index.sigma_, layout, block_size);
    expect_consumed(in, "NEXT");
  }
  BitReader ptab(sections["PTAB"]);
  index.patterns_ = PatternTable::read(ptab);
  expect_consumed(ptab, "PTAB");
  {
    BitReader in(sections["MARK"]);
    index.mark_ = CompressedBitvector::read_body(in, n, index.patterns_.vertex_count());
    expect_consumed(in, "MARK");
  }
  {
    BitReader in(sections["FAIL"]);
    index.failure_ = SparseFailure::read(in, n, t);
    expect_consumed(in, "FAIL");
  }
  {
    BitReader in(sections["REPT"]);
    index.report_ = SparseParentTree::read(in, n);
    expect_consumed(in, "REPT");
  }
  return index;
}

void CompressedIndex::save(const std::filesystem::path& path) const {
  const std::vector<uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

CompressedIndex CompressedIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace acsx
