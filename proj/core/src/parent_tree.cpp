#include "acsx/parent_tree.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "acsx/trie.hpp"

namespace acsx {

SparseParentTree SparseParentTree::build(std::span<const uint32_t> parent_by_num, const BitvectorOptions& options) {
  if (!is_dfs_preorder(parent_by_num)) throw std::invalid_argument("tree numbering is not a DFS preorder");
  const uint64_t n = parent_by_num.size();
  std::vector<bool> internal(n, false);
  std::vector<uint32_t> end(n);
  for (uint64_t v = 0; v < n; ++v) end[v] = static_cast<uint32_t>(v);
  for (uint64_t v = n; v-- > 1;) {
    const uint32_t p = parent_by_num[v];
    if (p == kNoVertex) continue;
    internal[p] = true;
    end[p] = std::max(end[p], end[v]);
  }
  std::vector<uint32_t> closes_at(n, 0);
  std::vector<uint64_t> internal_pos;
  for (uint64_t v = 0; v < n; ++v) {
    if (internal[v]) {
      internal_pos.push_back(v);
      ++closes_at[end[v]];
    }
  }
  std::vector<uint64_t> end_pos, group_last;
  BitWriter parens;
  uint64_t seen = 0;
  for (uint64_t v = 0; v < n; ++v) {
    if (internal[v]) parens.put_bit(true);
    if (closes_at[v] > 0) {
      for (uint32_t k = 0; k < closes_at[v]; ++k) parens.put_bit(false);
      end_pos.push_back(v);
      seen += closes_at[v];
      group_last.push_back(seen - 1);
    }
  }
  SparseParentTree tree;
  tree.internal_ = CompressedBitvector::from_positions(n, internal_pos, options);
  tree.ends_ = CompressedBitvector::from_positions(n, end_pos, options);
  tree.end_groups_ = CompressedBitvector::from_positions(internal_pos.size(), group_last, options);
  tree.paren_bits_ = parens.size();
  tree.parens_ = parens.take_words();
  tree.build_directory();
  return tree;
}

void SparseParentTree::build_directory() {
  const uint64_t words = (paren_bits_ + 63) / 64;
  word_opens_.assign(words + 1, 0);
  for (uint64_t w = 0; w < words; ++w) {
    const uint64_t mask = low_mask(static_cast<unsigned>(std::min<uint64_t>(64, paren_bits_ - 64 * w)));
    word_opens_[w + 1] = word_opens_[w] + static_cast<uint32_t>(std::popcount(parens_[w] & mask));
  }
  leaves_ = std::bit_ceil(std::max<uint64_t>(1, words));
  min_tree_.assign(2 * leaves_, std::numeric_limits<int32_t>::max());
  for (uint64_t w = 0; w < words; ++w) {
    int64_t e = excess(64 * w);
    int64_t lowest = e;
    const uint64_t stop = std::min<uint64_t>(64, paren_bits_ - 64 * w);
    // Positions 64w .. 64w+63; the excess before position x is tracked.
    for (uint64_t b = 0; b + 1 < stop; ++b) {
      e += ((parens_[w] >> b) & 1) ? 1 : -1;
      lowest = std::min(lowest, e);
    }
    min_tree_[leaves_ + w] = static_cast<int32_t>(lowest);
  }
  for (uint64_t i = leaves_; i-- > 1;) min_tree_[i] = std::min(min_tree_[2 * i], min_tree_[2 * i + 1]);
}

int64_t SparseParentTree::excess(uint64_t x) const {
  const uint64_t w = x / 64;
  const uint64_t opens = word_opens_[w] + static_cast<uint64_t>(std::popcount(parens_[w] & low_mask(x % 64)));
  return 2 * static_cast<int64_t>(opens) - static_cast<int64_t>(x);
}

uint64_t SparseParentTree::find_enclosing(uint64_t pos, int64_t target) const {
  // Within the word holding pos - 1.
  uint64_t x = pos;
  int64_t e = excess(pos);
  const uint64_t word = (pos - 1) / 64;
  while (x > word * 64) {
    --x;
    e -= ((parens_[x / 64] >> (x % 64)) & 1) ? 1 : -1;
    if (e <= target) return x;
  }
  // Rightmost earlier word whose minimum reaches the target.
  uint64_t node = leaves_ + word;
  for (;;) {
    if (node == 1) throw std::logic_error("unbalanced parentheses");
    if ((node & 1) && min_tree_[node - 1] <= target) {
      node = node - 1;
      break;
    }
    node >>= 1;
  }
  while (node < leaves_) node = min_tree_[2 * node + 1] <= target ? 2 * node + 1 : 2 * node;
  const uint64_t w = node - leaves_;
  x = 64 * (w + 1);
  e = excess(x);
  while (x > 64 * w) {
    --x;
    e -= ((parens_[x / 64] >> (x % 64)) & 1) ? 1 : -1;
    if (e <= target) return x;
  }
  throw std::logic_error("min-excess directory inconsistent");
}

uint32_t SparseParentTree::parent(uint32_t v) const {
  const uint64_t distinct_before = ends_.rank_all(v - 1);
  const uint64_t closed = distinct_before == 0 ? 0 : end_groups_.select(distinct_before) + 1;
  const uint64_t opens = internal_.rank_all(v - 1);
  const uint64_t pos = opens + closed;
  const int64_t target = static_cast<int64_t>(opens) - static_cast<int64_t>(closed) - 1;
  const uint64_t x = find_enclosing(pos, target);
  const uint64_t ordinal = (x + static_cast<uint64_t>(target)) / 2 + 1;
  return static_cast<uint32_t>(internal_.select(ordinal));
}

uint64_t SparseParentTree::size_in_bits() const {
  return 128 + internal_.body_bits() + ends_.body_bits() + end_groups_.body_bits() + paren_bits_;
}

void SparseParentTree::write(BitWriter& out) const {
  out.put(internal_.ones(), 64);
  out.put(ends_.ones(), 64);
  internal_.write_body(out);
  ends_.write_body(out);
  end_groups_.write_body(out);
  out.put_words(parens_, paren_bits_);
}

SparseParentTree SparseParentTree::read(BitReader& in, uint64_t universe) {
  SparseParentTree tree;
  const uint64_t q = in.get(64);
  const uint64_t distinct = in.get(64);
  if (q > universe || distinct > q) throw Error(ErrorCode::kCorrupt, "parent tree counts out of range");
  tree.internal_ = CompressedBitvector::read_body(in, universe, q);
  tree.ends_ = CompressedBitvector::read_body(in, universe, distinct);
  tree.end_groups_ = CompressedBitvector::read_body(in, q, distinct);
  tree.paren_bits_ = 2 * q;
  tree.parens_ = in.get_words(tree.paren_bits_);
  tree.parens_.push_back(0);
  tree.build_directory();
  return tree;
}

}  // namespace acsx
