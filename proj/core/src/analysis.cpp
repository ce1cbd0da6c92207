#include "acsx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace acsx {

// ---------------------------------------------------------------------------
// NaiveAhoCorasick

NaiveAhoCorasick::NaiveAhoCorasick(const Dictionary& dict) {
  nodes_.emplace_back();
  for (size_t id = 0; id < dict.size(); ++id) {
    uint32_t s = 0;
    for (Symbol c : dict.pattern(id)) {
      auto it = nodes_[s].children.find(c);
      if (it == nodes_[s].children.end()) {
        const auto fresh = static_cast<uint32_t>(nodes_.size());
        const uint32_t depth = nodes_[s].depth + 1;
        nodes_[s].children.emplace(c, fresh);
        nodes_.emplace_back();
        nodes_.back().depth = depth;
        s = fresh;
      } else {
        s = it->second;
      }
    }
    nodes_[s].ids.push_back(static_cast<uint32_t>(id));
  }
  std::deque<uint32_t> queue;
  for (const auto& [c, child] : nodes_[0].children) queue.push_back(child);
  while (!queue.empty()) {
    const uint32_t s = queue.front();
    queue.pop_front();
    for (const auto& [c, child] : nodes_[s].children) {
      uint32_t f = nodes_[s].fail;
      for (;;) {
        auto it = nodes_[f].children.find(c);
        if (it != nodes_[f].children.end()) {
          f = it->second;
          break;
        }
        if (f == 0) break;
        f = nodes_[f].fail;
      }
      nodes_[child].fail = f;
      nodes_[child].output_link = nodes_[f].ids.empty() ? nodes_[f].output_link : f;
      queue.push_back(child);
    }
  }
}

uint64_t NaiveAhoCorasick::scan(std::span<const Symbol> text, const OccurrenceSink& sink) const {
  uint64_t count = 0;
  uint32_t s = 0;
  for (uint64_t i = 0; i < text.size(); ++i) {
    for (;;) {
      auto it = nodes_[s].children.find(text[i]);
      if (it != nodes_[s].children.end()) {
        s = it->second;
        break;
      }
      if (s == 0) break;
      s = nodes_[s].fail;
    }
    for (uint32_t u = nodes_[s].ids.empty() ? nodes_[s].output_link : s; u != 0; u = nodes_[u].output_link) {
      for (uint32_t id : nodes_[u].ids) {
        sink(Occurrence{i, id, nodes_[u].depth});
        ++count;
      }
    }
  }
  return count;
}

std::vector<Occurrence> naive_ac_scan(const Dictionary& dict, std::span<const Symbol> text) {
  std::vector<Occurrence> out;
  NaiveAhoCorasick(dict).scan(text, [&](const Occurrence& o) { out.push_back(o); });
  return out;
}

// Walks are kept in start order, so the earliest start (longest match) at
// each end is reported first.
void SmpScanner::step(Symbol c, const OccurrenceSink& sink) {
  survivors_.clear();
  if (c < index_->sigma()) {
    walks_.push_back(0);
    for (uint32_t v : walks_) {
      if (const auto w = index_->next(v, c)) survivors_.push_back(*w);
    }
  }
  walks_.swap(survivors_);
  for (uint32_t v : walks_) {
    const auto ordinal = index_->mark_ordinal(v);
    if (!ordinal) continue;
    const auto [first, last] = index_->patterns().range(*ordinal);
    const uint32_t length = index_->patterns().length(*ordinal);
    for (uint64_t s = first; s < last; ++s) {
      sink(Occurrence{position_, index_->patterns().id(s), length});
      ++occurrences_;
    }
  }
  ++position_;
}

void SmpScanner::feed_symbols(std::span<const Symbol> symbols, const OccurrenceSink& sink) {
  for (Symbol c : symbols) step(c, sink);
}

void SmpScanner::feed(std::span<const uint8_t> bytes, const OccurrenceSink& sink) {
  for (uint8_t byte : bytes) step(index_->map_byte(byte), sink);
}

uint64_t smp_scan(const CompressedIndex& index, std::span<const Symbol> text, const OccurrenceSink& sink) {
  SmpScanner scanner(index);
  scanner.feed_symbols(text, sink);
  return scanner.occurrences();
}

Dictionary recover_dictionary(const CompressedIndex& index) {
  std::vector<std::vector<Symbol>> patterns(index.pattern_count());
  for (uint32_t v = 1; v <= index.edges(); ++v) {
    if (!index.is_marked(v)) continue;
    std::vector<Symbol> word;
    for (uint32_t u = v; u != 0;) {
      const auto [parent, c] = index.parent_edge(u);
      word.push_back(c);
      u = parent;
    }
    std::reverse(word.begin(), word.end());
    for (uint32_t id : index.pattern_ids_at(v)) patterns[id] = word;
  }
  return Dictionary::from_symbols(std::move(patterns), index.sigma());
}

// ---------------------------------------------------------------------------
// Entropy

// Vertices sharing a padded length-k context are contiguous in number order,
// so comparing neighbours suffices.
std::vector<uint32_t> context_classes(const Trie& trie, unsigned k) {
  const uint32_t n = trie.vertex_count();
  std::vector<uint32_t> cls(n, 0);
  auto same_context = [&](uint32_t a, uint32_t b) {
    if (trie.depth(a) < k || trie.depth(b) < k) return false;
    for (unsigned step = 0; step < k; ++step) {
      if (trie.label(a) != trie.label(b)) return false;
      a = trie.parent(a);
      b = trie.parent(b);
    }
    return true;
  };
  uint32_t next_class = 0;
  for (uint32_t num = 1; num < n; ++num) {
    if (!same_context(trie.by_num(num - 1), trie.by_num(num))) ++next_class;
    cls[num] = next_class;
  }
  return cls;
}

namespace {

// Sum over contexts of |s| H_0(s), in bits; the label `sentinel` is appended
// below every leaf when requested.
double context_code_length(const Trie& trie, unsigned k, bool leaf_edges, uint64_t* context_count) {
  const auto cls = context_classes(trie, k);
  const uint32_t n = trie.vertex_count();
  std::vector<bool> has_child(n, false);
  std::vector<uint64_t> keys;
  keys.reserve(n);
  for (uint32_t v = 1; v < n; ++v) {
    has_child[trie.parent(v)] = true;
    keys.push_back((uint64_t{cls[trie.num(trie.parent(v))]} << 32) | trie.label(v));
  }
  if (leaf_edges) {
    for (uint32_t v = 0; v < n; ++v) {
      if (!has_child[v]) keys.push_back((uint64_t{cls[trie.num(v)]} << 32) | trie.sigma());
    }
  }
  std::sort(keys.begin(), keys.end());
  double bits = 0;
  uint64_t contexts = 0;
  for (size_t g = 0; g < keys.size();) {
    const uint64_t context = keys[g] >> 32;
    size_t end = g;
    while (end < keys.size() && (keys[end] >> 32) == context) ++end;
    const double total = static_cast<double>(end - g);
    for (size_t r = g; r < end;) {
      size_t run = r;
      while (run < end && keys[run] == keys[r]) ++run;
      const double count = static_cast<double>(run - r);
      bits += count * std::log2(total / count);
      r = run;
    }
    ++contexts;
    g = end;
  }
  if (context_count) *context_count = contexts;
  return bits;
}

}  // namespace

double trie_entropy(const Trie& trie, unsigned k) {
  const uint64_t m = trie.edge_count();
  if (m == 0) return 0;
  return context_code_length(trie, k, false, nullptr) / static_cast<double>(m);
}

uint64_t leaf_count(const Trie& trie) {
  std::vector<bool> has_child(trie.vertex_count(), false);
  for (uint32_t v = 1; v < trie.vertex_count(); ++v) has_child[trie.parent(v)] = true;
  return static_cast<uint64_t>(std::count(has_child.begin(), has_child.end(), false));
}

double trie_entropy_with_leaf_edges(const Trie& trie, unsigned k) {
  const uint64_t edges = trie.edge_count() + leaf_count(trie);
  return context_code_length(trie, k, true, nullptr) / static_cast<double>(edges);
}

double log2_binomial(double n, double k) {
  if (k < 0 || k > n) return -INFINITY;
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::numbers::ln2;
}

double lower_bound_L(uint64_t m, uint64_t sigma) {
  const double universe = static_cast<double>(sigma) * static_cast<double>(m + 1);
  return log2_binomial(universe, static_cast<double>(m)) - std::log2(universe + 1);
}

unsigned default_max_order(uint64_t m, uint32_t sigma, double alpha) {
  if (sigma < 2 || m < 2) return 0;
  const double order = std::ceil(alpha * std::log2(static_cast<double>(m)) / std::log2(static_cast<double>(sigma)));
  return static_cast<unsigned>(std::clamp(order, 0.0, 8.0));
}

namespace {

unsigned valid_order(uint64_t m, uint32_t sigma, double alpha) {
  if (sigma < 2 || m < 2) return 0;
  const double limit = alpha * std::log2(static_cast<double>(m)) / std::log2(static_cast<double>(sigma)) - 2;
  return limit <= 0 ? 0 : static_cast<unsigned>(std::floor(limit));
}

}  // namespace

EntropyReport entropy_report(const Trie& trie, double alpha) {
  EntropyReport r;
  const uint64_t m = trie.edge_count();
  r.alpha = alpha;
  r.max_order = default_max_order(m, trie.sigma(), alpha);
  r.valid_order = valid_order(m, trie.sigma(), alpha);
  r.log_sigma = std::log2(static_cast<double>(std::max<uint32_t>(trie.sigma(), 1)));
  const double scale = static_cast<double>(m + leaf_count(trie)) / static_cast<double>(m + 1);
  for (unsigned k = 0; k <= r.max_order; ++k) {
    r.h.push_back(trie_entropy(trie, k));
    r.h_leaf_edges.push_back(trie_entropy_with_leaf_edges(trie, k));
    r.h_star.push_back(scale * r.h_leaf_edges.back());
  }
  r.lower_bound = lower_bound_L(m, trie.sigma());
  return r;
}

// ---------------------------------------------------------------------------
// Space accounting

bool SpaceReport::all_hold() const {
  return std::all_of(terms.begin(), terms.end(), [](const BoundTerm& t) { return !t.in_valid_range || t.holds; });
}

SpaceReport space_report(const CompressedIndex& index) {
  SpaceReport r;
  const NextEncoding& next = index.next_encoding();
  r.sizes = index.sizes();
  r.m = index.edges();
  r.sigma = index.sigma();
  r.patterns = index.pattern_count();
  r.marked = index.marked_count();
  r.t = index.t();
  r.dense_set = index.dense_set_size();
  r.block_size = next.block_size();
  r.blocks = next.block_count();
  for (uint64_t g = 0; g < next.block_count(); ++g) {
    r.binomial_sum += log2_binomial(static_cast<double>(next.block_length(g)), static_cast<double>(next.block_ones(g)));
  }
  r.lower_bound = lower_bound_L(r.m, r.sigma);
  return r;
}

SpaceReport entropy_bound_check(const CompressedIndex& index, const Trie& trie, double alpha) {
  if (trie.edge_count() != index.edges() || trie.sigma() != index.sigma()) {
    throw std::invalid_argument("trie does not match index");
  }
  SpaceReport r = space_report(index);
  const NextEncoding& next = index.next_encoding();
  const double m = static_cast<double>(r.m);
  const double sigma = static_cast<double>(r.sigma);
  const double b = static_cast<double>(r.block_size);
  const double payload = static_cast<double>(r.sizes.next_payload);

  // Edges per block column: blocks i, t+i, 2t+i, ... cover the same numbers.
  const uint64_t per_letter = next.blocks_per_letter();
  uint64_t max_column = 0;
  for (uint64_t i = 0; i < per_letter; ++i) {
    uint64_t column = 0;
    for (uint64_t c = 0; c < r.sigma; ++c) column += next.block_ones(c * per_letter + i);
    max_column = std::max(max_column, column);
  }

  const unsigned max_order = default_max_order(r.m, r.sigma, alpha);
  const unsigned valid = valid_order(r.m, r.sigma, alpha);
  for (unsigned k = 0; k <= max_order; ++k) {
    BoundTerm term;
    term.k = k;
    uint64_t contexts = 0;
    term.entropy_bits = context_code_length(trie, k, false, &contexts);
    term.log_e_bits = 1.443 * m;
    term.boost_slack = 2 * std::pow(sigma, k + 1) * b;
    term.rounding = static_cast<double>(r.blocks);
    term.bound = term.entropy_bits + term.log_e_bits + term.boost_slack + term.rounding;
    term.tight_slack = static_cast<double>(contexts - 1) * static_cast<double>(max_column);
    term.binomial_bound = term.entropy_bits + term.tight_slack + (m + 1) * std::numbers::log2e;
    term.in_valid_range = k <= valid;
    term.holds = payload <= term.bound;
    term.binomial_holds = r.binomial_sum <= term.binomial_bound + 1e-6 * m + 1e-6;
    r.terms.push_back(term);
  }
  return r;
}

std::string to_key_values(const SpaceReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << "m=" << r.m << "\n"
      << "sigma=" << r.sigma << "\n"
      << "patterns=" << r.patterns << "\n"
      << "marked=" << r.marked << "\n"
      << "t=" << r.t << "\n"
      << "dense_set=" << r.dense_set << "\n"
      << "block_size=" << r.block_size << "\n"
      << "blocks=" << r.blocks << "\n"
      << "bits.meta=" << r.sizes.meta << "\n"
      << "bits.next_payload=" << r.sizes.next_payload << "\n"
      << "bits.next_directory=" << r.sizes.next_directory << "\n"
      << "bits.mark=" << r.sizes.mark << "\n"
      << "bits.fail_membership=" << r.sizes.fail_membership << "\n"
      << "bits.fail_tree=" << r.sizes.fail_tree << "\n"
      << "bits.report_tree=" << r.sizes.report_tree << "\n"
      << "bits.pattern_table=" << r.sizes.pattern_table << "\n"
      << "bits.total=" << r.sizes.total() << "\n"
      << "binomial_sum=" << r.binomial_sum << "\n"
      << "lower_bound=" << r.lower_bound << "\n";
  if (r.m > 0) {
    out << "next_bits_per_edge=" << static_cast<double>(r.sizes.next_payload + r.sizes.next_directory) / r.m << "\n"
        << "total_bits_per_edge=" << static_cast<double>(r.sizes.total()) / r.m << "\n";
  }
  for (const BoundTerm& t : r.terms) {
    const std::string p = "bound.k" + std::to_string(t.k) + ".";
    out << p << "entropy_bits=" << t.entropy_bits << "\n"
        << p << "boost_slack=" << t.boost_slack << "\n"
        << p << "rounding=" << t.rounding << "\n"
        << p << "bound=" << t.bound << "\n"
        << p << "tight_slack=" << t.tight_slack << "\n"
        << p << "binomial_bound=" << t.binomial_bound << "\n"
        << p << "in_valid_range=" << (t.in_valid_range ? 1 : 0) << "\n"
        << p << "holds=" << (t.holds ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string to_key_values(const EntropyReport& r) {
  std::ostringstream out;
  out.precision(10);
  out << "alpha=" << r.alpha << "\n"
      << "max_order=" << r.max_order << "\n"
      << "valid_order=" << r.valid_order << "\n"
      << "log_sigma=" << r.log_sigma << "\n"
      << "lower_bound=" << r.lower_bound << "\n";
  for (size_t k = 0; k < r.h.size(); ++k) {
    out << "H" << k << "=" << r.h[k] << "\n"
        << "H" << k << ".leaf_edges=" << r.h_leaf_edges[k] << "\n"
        << "H" << k << ".star=" << r.h_star[k] << "\n";
  }
  return out.str();
}

}  // namespace acsx
