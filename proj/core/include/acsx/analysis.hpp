#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "acsx/compressed_index.hpp"
#include "acsx/dictionary.hpp"
#include "acsx/matcher.hpp"
#include "acsx/trie.hpp"

namespace acsx {

// Textbook pointer-based Aho-Corasick automaton built directly from the
// dictionary; shares no structure with the succinct index.
class NaiveAhoCorasick {
 public:
  explicit NaiveAhoCorasick(const Dictionary& dict);
  // Symbols outside the alphabet match nothing.
  uint64_t scan(std::span<const Symbol> text, const OccurrenceSink& sink) const;
  size_t state_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::map<Symbol, uint32_t> children;
    uint32_t fail = 0;
    uint32_t output_link = 0;  // nearest proper suffix state with patterns; 0 if none
    uint32_t depth = 0;
    std::vector<uint32_t> ids;
  };
  std::vector<Node> nodes_;
};

std::vector<Occurrence> naive_ac_scan(const Dictionary& dict, std::span<const Symbol> text);

// Restarts a walk over `next` at every text position and reports marked
// vertices along it; reads only the transition, mark and pattern structures.
// Live walks are kept across calls, so input may arrive in chunks.
class SmpScanner {
 public:
  explicit SmpScanner(const CompressedIndex& index) : index_(&index) {}
  void feed(std::span<const uint8_t> bytes, const OccurrenceSink& sink);
  void feed_symbols(std::span<const Symbol> symbols, const OccurrenceSink& sink);
  uint64_t occurrences() const { return occurrences_; }

 private:
  void step(Symbol c, const OccurrenceSink& sink);

  const CompressedIndex* index_;
  std::vector<uint32_t> walks_;  // vertices of live walks, oldest start first
  std::vector<uint32_t> survivors_;
  uint64_t position_ = 0;
  uint64_t occurrences_ = 0;
};

uint64_t smp_scan(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink);

// Pattern strings read back from the index by walking parent edges from each
// marked vertex; ids and symbols match the dictionary the index was built from.
Dictionary recover_dictionary(const CompressedIndex& index);

// ---------------------------------------------------------------------------
// Entropy

// Context class of every vertex number: equal ids iff the length-k suffixes
// of the sentinel-padded root strings agree. Classes are contiguous ranges.
std::vector<uint32_t> context_classes(const Trie& trie, unsigned k);

// k-th order empirical entropy of the edge labels, bits per edge.
double trie_entropy(const Trie& trie, unsigned k);
// Same quantity for the trie with one extra sentinel-labelled edge below
// every leaf.
double trie_entropy_with_leaf_edges(const Trie& trie, unsigned k);
uint64_t leaf_count(const Trie& trie);

// log2 C(sigma (m+1), m) - log2(sigma (m+1) + 1), via log-gamma.
double lower_bound_L(uint64_t m, uint64_t sigma);
// log2 C(n, k) via log-gamma.
double log2_binomial(double n, double k);

// min(ceil(alpha log_sigma m), 8); 0 when sigma < 2 or m < 2.
unsigned default_max_order(uint64_t m, uint32_t sigma, double alpha);

struct EntropyReport {
  double alpha = 0.5;
  unsigned max_order = 0;
  // Orders up to this value lie within max(0, alpha log_sigma m - 2).
  unsigned valid_order = 0;
  double log_sigma = 0;
  std::vector<double> h;            // h[k] = H_k
  std::vector<double> h_leaf_edges;  // H_k of the trie with sentinel leaf edges
  std::vector<double> h_star;       // (m + leaves) / (m + 1) * h_leaf_edges[k]
  double lower_bound = 0;
};

EntropyReport entropy_report(const Trie& trie, double alpha = 0.5);

// ---------------------------------------------------------------------------
// Space accounting

struct BoundTerm {
  unsigned k = 0;
  double entropy_bits = 0;   // m H_k
  double log_e_bits = 0;     // 1.443 m
  double boost_slack = 0;    // 2 sigma^(k+1) b
  double rounding = 0;       // one bit per block
  double bound = 0;          // sum of the four terms above
  double tight_slack = 0;    // (contexts - 1) * max edges per block column
  double binomial_bound = 0; // m H_k + tight_slack + (m + 1) log2 e
  bool in_valid_range = true;
  bool holds = false;        // measured payload <= bound
  bool binomial_holds = false;  // binomial sum <= binomial_bound
};

struct SpaceReport {
  IndexSizes sizes;
  uint64_t m = 0;
  uint32_t sigma = 0;
  uint64_t patterns = 0;
  uint64_t marked = 0;
  uint32_t t = 0;
  uint64_t dense_set = 0;
  uint64_t block_size = 0;
  uint64_t blocks = 0;
  double binomial_sum = 0;   // sum over blocks of log2 C(b_i, n_{c,i})
  double lower_bound = 0;
  std::vector<BoundTerm> terms;  // empty without a trie
  bool all_hold() const;
};

// Component sizes and the lower bound only.
SpaceReport space_report(const CompressedIndex& index);
// Adds the per-order bound comparison for k in [0..max_order].
SpaceReport entropy_bound_check(const CompressedIndex& index, const Trie& trie, double alpha = 0.5);

// Flat `key=value` lines.
std::string to_key_values(const SpaceReport& report);
std::string to_key_values(const EntropyReport& report);

}  // namespace acsx
