#include "acsx/matcher.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace acsx {
namespace {

uint64_t ceil_sqrt(uint64_t m) {
  uint64_t s = static_cast<uint64_t>(std::sqrt(static_cast<double>(m)));
  while (s * s < m) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= m) --s;
  return std::max<uint64_t>(1, s);
}

// Emits patterns at v and along its report chain, ending at text index end.
void report_at(const CompressedIndex& index, uint32_t v, uint64_t end, const OccurrenceSink& sink, ScanStats& stats) {
  for (uint32_t u = v;; u = index.report_parent(u)) {
    if (const auto ordinal = index.mark_ordinal(u)) {
      const auto [first, last] = index.patterns().range(*ordinal);
      const uint32_t length = index.patterns().length(*ordinal);
      for (uint64_t s = first; s < last; ++s) {
        sink(Occurrence{end, index.patterns().id(s), length});
        ++stats.occurrences;
      }
    }
    if (u == 0) break;
  }
}

}  // namespace

Scanner::Scanner(const CompressedIndex& index)
    : index_(&index),
      step_(ceil_sqrt(index.edges())),
      window_(2 * step_ + 1),
      checkpoint_vertex_(step_ + 2) {
  reach_frontier();
}

void Scanner::reach_frontier() {
  frontier_vertex_ = v_;
  if (i_max_ % step_ == 0) {
    checkpoint_vertex_[checkpoints_ % checkpoint_vertex_.size()] = v_;
    ++checkpoints_;
    stats_.max_checkpoints = std::max<uint64_t>(stats_.max_checkpoints,
                                                std::min<uint64_t>(checkpoints_, checkpoint_vertex_.size()));
  }
}

void Scanner::report(const OccurrenceSink& sink) {
  i_max_ = i_;
  report_at(*index_, v_, i_ - 1, sink, stats_);
  reach_frontier();
}

void Scanner::push_front(Symbol c) {
  const uint64_t cap = window_.size();
  window_head_ = (window_head_ + cap - 1) % cap;
  window_[window_head_] = c;
  window_size_ = std::min(window_size_ + 1, cap);
  stats_.max_window = std::max(stats_.max_window, window_size_);
}

Symbol Scanner::pop_front() {
  const Symbol c = window_[window_head_];
  window_head_ = (window_head_ + 1) % window_.size();
  --window_size_;
  return c;
}

// Refills the window with T[i .. j-1] where j is the first checkpoint at
// least step_ past i, or the frontier.
void Scanner::restore() {
  uint64_t j = (i_ + step_ + step_ - 1) / step_ * step_;
  uint32_t u;
  if (j >= i_max_) {
    j = i_max_;
    u = frontier_vertex_;
  } else {
    const uint64_t k = j / step_;
    assert(k + checkpoint_vertex_.size() >= checkpoints_);
    u = checkpoint_vertex_[k % checkpoint_vertex_.size()];
  }
  window_size_ = 0;
  for (uint64_t pos = j; pos > i_; --pos) {
    const auto [p, c] = index_->parent_edge(u);
    push_front(c);
    u = p;
  }
  stats_.restore_steps += j - i_;
  ++stats_.restores;
}

void Scanner::feed(std::span<const uint8_t> bytes, const OccurrenceSink& sink) {
  std::vector<Symbol> mapped(std::min<size_t>(bytes.size(), 1 << 16));
  for (size_t at = 0; at < bytes.size(); at += mapped.size()) {
    const size_t len = std::min(mapped.size(), bytes.size() - at);
    for (size_t k = 0; k < len; ++k) mapped[k] = index_->map_byte(bytes[at + k]);
    run(std::span<const Symbol>(mapped.data(), len), sink);
  }
}

void Scanner::feed_symbols(std::span<const Symbol> symbols, const OccurrenceSink& sink) { run(symbols, sink); }

void Scanner::run(std::span<const Symbol> chunk, const OccurrenceSink& sink) {
  const CompressedIndex& index = *index_;
  const Symbol sigma = index.sigma();
  size_t fresh = 0;  // next unread chunk letter, which is T[i_max]
  for (;;) {
    Symbol c;
    const bool at_frontier = i_ == i_max_;
    if (at_frontier) {
      if (fresh == chunk.size()) return;
      c = chunk[fresh];
      if (c >= sigma) {
        // No pattern contains this letter.
        v_ = 0;
        ++fresh;
        ++i_;
        ++stats_.letters;
        report(sink);
        continue;
      }
    } else {
      if (window_size_ == 0) restore();
      c = window_[window_head_];
    }
    if (const auto child = index.next(v_, c)) {
      v_ = *child;
      if (at_frontier) {
        ++fresh;
        ++stats_.letters;
      } else {
        pop_front();
      }
      ++i_;
      if (i_ > i_max_) report(sink);
      continue;
    }
    uint32_t p = v_;
    while (!index.in_dense_set(p)) {
      const auto [up, letter] = index.parent_edge(p);
      push_front(letter);
      --i_;
      ++stats_.backtrack_steps;
      p = up;
    }
    if (p == 0) {
      // Consume T[i] from the root.
      v_ = 0;
      if (i_ == i_max_) {
        ++fresh;
        ++stats_.letters;
      } else {
        if (window_size_ == 0) restore();
        pop_front();
      }
      ++i_;
      if (i_ > i_max_) report(sink);
      continue;
    }
    v_ = *index.failure_parent(p);
    ++stats_.failure_jumps;
  }
}

std::vector<Symbol> map_text(const CompressedIndex& index, std::span<const uint8_t> text) {
  std::vector<Symbol> out(text.size());
  for (size_t k = 0; k < text.size(); ++k) out[k] = index.map_byte(text[k]);
  return out;
}

uint64_t scan(const CompressedIndex& index, std::span<const uint8_t> text, const OccurrenceSink& sink,
              ScanStats* stats) {
  Scanner scanner(index);
  scanner.feed(text, sink);
  if (stats) *stats = scanner.stats();
  return scanner.stats().occurrences;
}

uint64_t scan_symbols(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink,
                      ScanStats* stats) {
  Scanner scanner(index);
  scanner.feed_symbols(text, sink);
  if (stats) *stats = scanner.stats();
  return scanner.stats().occurrences;
}

uint64_t scan_reference(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink,
                        ScanStats* stats) {
  ScanStats local;
  const Symbol sigma = index.sigma();
  uint32_t v = 0;
  uint64_t i = 0, i_max = 0;
  const uint64_t n = text.size();
  for (;;) {
    if (i > i_max) {
      i_max = i;
      report_at(index, v, i - 1, sink, local);
    }
    if (i == n) break;
    const Symbol c = text[i];
    if (c >= sigma) {
      v = 0;
      ++i;
      continue;
    }
    if (const auto child = index.next(v, c)) {
      v = *child;
      ++i;
      continue;
    }
    uint32_t p = v;
    while (!index.in_dense_set(p)) {
      p = index.parent_edge(p).first;
      --i;
      ++local.backtrack_steps;
    }
    if (p == 0) {
      v = 0;
      ++i;
      continue;
    }
    v = *index.failure_parent(p);
    ++local.failure_jumps;
  }
  local.letters = n;
  if (stats) *stats = local;
  return local.occurrences;
}

}  // namespace acsx
