#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acsx/compressed_bitvector.hpp"

namespace acsx {

// Rooted tree whose members are a subset of [0..n), numbered so that
// increasing order is a DFS preorder with children visited in increasing
// order. Answers parent(v) for members.
//
// Only internal vertices are written as parentheses. Leaves stay implicit:
// the parent of any member is the innermost internal vertex whose subtree
// interval [u, end(u)] contains it. Three compressed bitvectors map a vertex
// number to its position among the parentheses:
//   internal      (length n)      ones at internal vertices
//   ends          (length n)      ones at distinct subtree-interval ends
//   end_groups    (length q)      internal vertices sorted by end; one at the
//                                 last entry of each equal-end group
class SparseParentTree {
 public:
  SparseParentTree() = default;

  // parent_by_num[v] is the parent of member v >= 1; kNoVertex marks
  // non-members. Entry 0 is the root. Throws std::invalid_argument when the
  // numbering is not a preorder.
  static SparseParentTree build(std::span<const uint32_t> parent_by_num, const BitvectorOptions& options = {});

  uint64_t universe() const { return internal_.length(); }
  uint64_t internal_count() const { return internal_.ones(); }
  // Defined for members v >= 1.
  uint32_t parent(uint32_t v) const;

  uint64_t size_in_bits() const;
  void write(BitWriter& out) const;
  static SparseParentTree read(BitReader& in, uint64_t universe);

 private:
  void build_directory();
  // Largest x < pos with excess(x) <= target, where excess(x) counts
  // opens minus closes in parens[0..x).
  uint64_t find_enclosing(uint64_t pos, int64_t target) const;
  int64_t excess(uint64_t x) const;

  CompressedBitvector internal_;
  CompressedBitvector ends_;
  CompressedBitvector end_groups_;
  std::vector<uint64_t> parens_ = std::vector<uint64_t>(1, 0);
  uint64_t paren_bits_ = 0;

  // Rebuilt on load: opens before each word and a min-excess segment tree
  // over words.
  std::vector<uint32_t> word_opens_;
  std::vector<int32_t> min_tree_;
  uint64_t leaves_ = 1;
};

}  // namespace acsx
