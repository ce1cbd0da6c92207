#include "acsx/trie.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "acsx/error.hpp"

namespace acsx {

std::optional<uint32_t> Trie::child(uint32_t v, Symbol c) const {
  const auto it = edges_.find(edge_key(v, c));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<uint32_t> Trie::bfs_order() const {
  uint32_t max_depth = 0;
  for (uint32_t d : depth_) max_depth = std::max(max_depth, d);
  std::vector<uint32_t> start(max_depth + 2, 0);
  for (uint32_t d : depth_) ++start[d + 1];
  for (size_t d = 1; d < start.size(); ++d) start[d] += start[d - 1];
  std::vector<uint32_t> order(vertex_count());
  for (uint32_t v = 0; v < vertex_count(); ++v) order[start[depth_[v]]++] = v;
  return order;
}

Trie build_trie(const Dictionary& dict) {
  if (dict.size() == 0) throw Error(ErrorCode::kEmptyDictionary, "dictionary has no patterns");
  Trie trie;
  trie.sigma_ = dict.sigma();
  trie.parent_.push_back(Trie::kRoot);
  trie.label_.push_back(kNoSymbol);
  trie.depth_.push_back(0);
  trie.ids_.emplace_back();
  trie.edges_.reserve(dict.total_length());
  trie.pattern_vertex_.reserve(dict.size());
  for (uint32_t id = 0; id < dict.size(); ++id) {
    uint32_t v = Trie::kRoot;
    for (Symbol c : dict.pattern(id)) {
      const auto [it, inserted] = trie.edges_.try_emplace(Trie::edge_key(v, c), trie.vertex_count());
      if (inserted) {
        trie.parent_.push_back(v);
        trie.label_.push_back(c);
        trie.depth_.push_back(trie.depth_[v] + 1);
        trie.ids_.emplace_back();
      }
      v = it->second;
    }
    if (trie.ids_[v].empty()) ++trie.marked_count_;
    trie.ids_[v].push_back(id);
    trie.pattern_vertex_.push_back(v);
  }
  return trie;
}

void compute_xbw_numbering(Trie& trie) {
  const uint32_t n = trie.vertex_count();
  std::vector<uint32_t> rank(n), anc(trie.parent_);
  for (uint32_t v = 1; v < n; ++v) rank[v] = trie.label_[v] + 1;
  rank[Trie::kRoot] = 0;

  std::vector<std::pair<uint64_t, uint32_t>> keys(n);
  uint32_t max_depth = 0;
  for (uint32_t d : trie.depth_) max_depth = std::max(max_depth, d);
  // rank holds the order of the first h letters of each reversed string.
  for (uint64_t h = 1;; h *= 2) {
    for (uint32_t v = 0; v < n; ++v) keys[v] = {(uint64_t{rank[v]} << 32) | rank[anc[v]], v};
    std::sort(keys.begin(), keys.end());
    uint32_t next_rank = 0;
    for (uint32_t i = 0; i < n; ++i) {
      if (i > 0 && keys[i].first != keys[i - 1].first) ++next_rank;
      rank[keys[i].second] = next_rank;
    }
    if (next_rank + 1 == n || 2 * h >= max_depth) break;
    std::vector<uint32_t> jumped(n);
    for (uint32_t v = 0; v < n; ++v) jumped[v] = anc[anc[v]];
    anc.swap(jumped);
  }
  trie.num_ = rank;
  trie.by_num_.assign(n, 0);
  for (uint32_t v = 0; v < n; ++v) trie.by_num_[rank[v]] = v;
}

void compute_failure_links(Trie& trie) {
  trie.failure_.assign(trie.vertex_count(), Trie::kRoot);
  for (uint32_t u : trie.bfs_order()) {
    const uint32_t v = trie.parent_[u];
    if (u == Trie::kRoot || v == Trie::kRoot) continue;
    const Symbol c = trie.label_[u];
    uint32_t f = trie.failure_[v];
    for (;;) {
      if (const auto next = trie.child(f, c)) {
        trie.failure_[u] = *next;
        break;
      }
      if (f == Trie::kRoot) break;
      f = trie.failure_[f];
    }
  }
}

void compute_report_links(Trie& trie) {
  if (!trie.has_failure()) compute_failure_links(trie);
  trie.report_.assign(trie.vertex_count(), Trie::kRoot);
  for (uint32_t u : trie.bfs_order()) {
    if (u == Trie::kRoot) continue;
    const uint32_t f = trie.failure_[u];
    trie.report_[u] = trie.marked(f) ? f : trie.report_[f];
  }
}

bool is_dfs_preorder(std::span<const uint32_t> parent_by_num) {
  if (parent_by_num.empty()) return true;
  std::vector<uint32_t> path{0};
  for (uint32_t v = 1; v < parent_by_num.size(); ++v) {
    const uint32_t p = parent_by_num[v];
    if (p == kNoVertex) continue;
    if (p >= v) return false;
    while (!path.empty() && path.back() != p) path.pop_back();
    if (path.empty()) return false;
    path.push_back(v);
  }
  return true;
}

bool verify_dfs_property(const Trie& trie) {
  std::vector<uint32_t> parent(trie.vertex_count(), kNoVertex);
  for (uint32_t v = 1; v < trie.vertex_count(); ++v) parent[trie.num(v)] = trie.num(trie.failure(v));
  return is_dfs_preorder(parent);
}

Trie build_full_trie(const Dictionary& dict) {
  Trie trie = build_trie(dict);
  compute_xbw_numbering(trie);
  compute_failure_links(trie);
  compute_report_links(trie);
  if (!verify_dfs_property(trie)) throw std::logic_error("failure tree is not numbered in DFS preorder");
  return trie;
}

}  // namespace acsx
