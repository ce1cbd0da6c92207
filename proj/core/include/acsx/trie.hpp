#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "acsx/dictionary.hpp"

namespace acsx {

inline constexpr uint32_t kNoVertex = ~uint32_t{0};

// Explicit pointer-form trie used during index construction.
//
// Vertices are identified by creation order; the root is vertex 0 and every
// parent id is smaller than its children's. The XBW number of vertex v is
// num[v], and by_num is its inverse.
class Trie {
 public:
  static constexpr uint32_t kRoot = 0;

  uint32_t sigma() const { return sigma_; }
  uint32_t vertex_count() const { return static_cast<uint32_t>(parent_.size()); }
  uint64_t edge_count() const { return parent_.size() - 1; }
  size_t pattern_count() const { return pattern_vertex_.size(); }

  uint32_t parent(uint32_t v) const { return parent_[v]; }
  Symbol label(uint32_t v) const { return label_[v]; }
  uint32_t depth(uint32_t v) const { return depth_[v]; }
  std::optional<uint32_t> child(uint32_t v, Symbol c) const;

  bool marked(uint32_t v) const { return !ids_[v].empty(); }
  // Pattern ids ending at v, ascending.
  const std::vector<uint32_t>& pattern_ids(uint32_t v) const { return ids_[v]; }
  uint32_t pattern_vertex(uint32_t id) const { return pattern_vertex_[id]; }
  uint32_t marked_count() const { return marked_count_; }

  bool numbered() const { return !num_.empty(); }
  uint32_t num(uint32_t v) const { return num_[v]; }
  uint32_t by_num(uint32_t n) const { return by_num_[n]; }

  bool has_failure() const { return !failure_.empty(); }
  uint32_t failure(uint32_t v) const { return failure_[v]; }
  bool has_report() const { return !report_.empty(); }
  uint32_t report(uint32_t v) const { return report_[v]; }

  // Vertices in nondecreasing depth order, root first.
  std::vector<uint32_t> bfs_order() const;

 private:
  friend Trie build_trie(const Dictionary& dict);
  friend void compute_xbw_numbering(Trie& trie);
  friend void compute_failure_links(Trie& trie);
  friend void compute_report_links(Trie& trie);

  static uint64_t edge_key(uint32_t v, Symbol c) { return (uint64_t{v} << 32) | c; }

  uint32_t sigma_ = 0;
  std::vector<uint32_t> parent_;
  std::vector<Symbol> label_;
  std::vector<uint32_t> depth_;
  std::vector<std::vector<uint32_t>> ids_;
  std::vector<uint32_t> pattern_vertex_;
  uint32_t marked_count_ = 0;
  std::unordered_map<uint64_t, uint32_t> edges_;
  std::vector<uint32_t> num_;
  std::vector<uint32_t> by_num_;
  std::vector<uint32_t> failure_;
  std::vector<uint32_t> report_;
};

// Minimal trie spelling every pattern; duplicates share one marked vertex.
Trie build_trie(const Dictionary& dict);

// num(u) < num(v) iff str(u) reversed precedes str(v) reversed. Uses prefix
// doubling over ancestor jump pointers: O(m log m log depth).
void compute_xbw_numbering(Trie& trie);

// Longest proper suffix of str(v) spelled on a root path; root for depth 1.
void compute_failure_links(Trie& trie);

// Longest proper suffix of str(v) that is a pattern; root when none.
// Requires failure links.
void compute_report_links(Trie& trie);

// True iff num is a DFS preorder of the failure tree with children visited
// in increasing num order. Requires numbering and failure links.
bool verify_dfs_property(const Trie& trie);

// True iff vertex order 0..n-1 is a DFS preorder of the tree given by
// parent_by_num (children in increasing order). Entries equal to kNoVertex
// are not tree members and are skipped; entry 0 is the root.
bool is_dfs_preorder(std::span<const uint32_t> parent_by_num);

// build_trie followed by numbering, failure and report links. Throws
// std::logic_error if the failure tree is not preorder-numbered.
Trie build_full_trie(const Dictionary& dict);

}  // namespace acsx
