#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "acsx/compressed_index.hpp"

namespace acsx {

struct Occurrence {
  uint64_t end = 0;     // text index of the last matched letter
  uint32_t id = 0;      // pattern id
  uint32_t length = 0;  // pattern length
  uint64_t start() const { return end + 1 - length; }
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Receives occurrences in nondecreasing end order; within one end, longer
// patterns first, then ascending id.
using OccurrenceSink = std::function<void(const Occurrence&)>;

struct ScanStats {
  uint64_t letters = 0;
  uint64_t occurrences = 0;
  uint64_t backtrack_steps = 0;  // parent_edge calls while seeking a W ancestor
  uint64_t restore_steps = 0;    // parent_edge calls while refilling the window
  uint64_t restores = 0;
  uint64_t failure_jumps = 0;
  uint64_t max_window = 0;
  uint64_t max_checkpoints = 0;
  uint64_t parent_edge_steps() const { return backtrack_steps + restore_steps; }
};

// Streaming matcher over a shared index. Only a window of at most
// 2*ceil(sqrt(m)) + 1 recent letters and ceil(sqrt(m)) + 2 checkpoint
// vertices are kept; older letters are recovered by walking parent edges.
// Input may arrive in any number of chunks.
class Scanner {
 public:
  explicit Scanner(const CompressedIndex& index);

  // Bytes are mapped through the index alphabet; unmapped bytes match nothing.
  void feed(std::span<const uint8_t> bytes, const OccurrenceSink& sink);
  // Symbols >= sigma match nothing.
  void feed_symbols(std::span<const Symbol> symbols, const OccurrenceSink& sink);

  const ScanStats& stats() const { return stats_; }
  uint64_t window_capacity() const { return window_.size(); }
  uint64_t checkpoint_capacity() const { return checkpoint_vertex_.size(); }

 private:
  void run(std::span<const Symbol> chunk, const OccurrenceSink& sink);
  void report(const OccurrenceSink& sink);
  void reach_frontier();
  void push_front(Symbol c);
  Symbol pop_front();
  void restore();

  const CompressedIndex* index_;
  uint64_t step_;  // ceil(sqrt(m))

  uint32_t v_ = 0;
  uint64_t i_ = 0;
  uint64_t i_max_ = 0;

  // Ring buffer holding T[i .. i + window_size_ - 1].
  std::vector<Symbol> window_;
  uint64_t window_head_ = 0;
  uint64_t window_size_ = 0;

  // Vertex at the first visit of position k * step_, for the most recent
  // multiples, indexed by k modulo the ring length.
  std::vector<uint32_t> checkpoint_vertex_;
  uint64_t checkpoints_ = 0;  // number of multiples reached so far
  uint32_t frontier_vertex_ = 0;

  ScanStats stats_;
};

// Scans a whole text with a fresh Scanner; returns the occurrence count.
uint64_t scan(const CompressedIndex& index, std::span<const uint8_t> text, const OccurrenceSink& sink,
              ScanStats* stats = nullptr);
uint64_t scan_symbols(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink,
                      ScanStats* stats = nullptr);

// Same automaton walk reading letters from the fully stored text instead of
// a window; used to isolate window and checkpoint behaviour.
uint64_t scan_reference(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink,
                        ScanStats* stats = nullptr);

// Text bytes mapped through the index alphabet.
std::vector<Symbol> map_text(const CompressedIndex& index, std::span<const uint8_t> text);

}  // namespace acsx
