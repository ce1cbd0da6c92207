#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "acsx/compressed_bitvector.hpp"
#include "acsx/dictionary.hpp"
#include "acsx/int_vector.hpp"
#include "acsx/next_encoding.hpp"
#include "acsx/parent_tree.hpp"
#include "acsx/trie.hpp"

namespace acsx {

// Vertices whose depth is congruent to `residue` modulo t, plus the root.
struct DenseSubset {
  uint32_t t = 1;
  uint32_t residue = 0;
  std::vector<uint32_t> nums;  // ascending vertex numbers
};

// Picks the residue class with the fewest vertices. Throws for t < 1.
DenseSubset choose_dense_subset(const Trie& trie, uint32_t t);

// Failure tree restricted to W and the important vertices (the root and
// every failure target of a W member). Each kept vertex hangs below its
// nearest important proper ancestor in the failure tree. Entry v is the
// parent number of vertex number v, or kNoVertex when v is dropped or is the
// root.
std::vector<uint32_t> transformed_failure_tree(const Trie& trie, const DenseSubset& subset);

// Failure links stored only for members of a t-dense subset W.
class SparseFailure {
 public:
  SparseFailure() = default;

  uint32_t t() const { return t_; }
  uint64_t member_count() const { return members_.ones(); }
  bool contains(uint32_t v) const { return members_.access(v); }
  // Failure target of v, or nullopt when v is the root or not in W.
  std::optional<uint32_t> parent(uint32_t v) const;

  uint64_t membership_bits() const { return 64 + members_.body_bits(); }
  uint64_t tree_bits() const { return tree_.size_in_bits(); }
  const SparseParentTree& tree() const { return tree_; }

  void write(BitWriter& out) const;
  static SparseFailure read(BitReader& in, uint64_t universe, uint32_t t);

 private:
  friend SparseFailure encode_sparse_failure(const Trie&, const DenseSubset&, const BitvectorOptions&);
  uint32_t t_ = 1;
  CompressedBitvector members_;
  SparseParentTree tree_;
};

SparseFailure encode_sparse_failure(const Trie& trie, const DenseSubset& subset, const BitvectorOptions& options = {});

// Marked vertex ordinal -> pattern ids and pattern length.
class PatternTable {
 public:
  PatternTable() = default;
  // ids_by_vertex lists, per marked vertex in number order, its ascending ids.
  static PatternTable build(const std::vector<std::vector<uint32_t>>& ids_by_vertex,
                            const std::vector<uint32_t>& length_by_vertex, uint64_t pattern_count);

  uint64_t pattern_count() const { return ids_.size(); }
  uint64_t vertex_count() const { return lengths_.size(); }
  // 1-based marked ordinal -> half-open range into id().
  std::pair<uint64_t, uint64_t> range(uint64_t ordinal) const;
  uint32_t id(uint64_t slot) const { return static_cast<uint32_t>(ids_[slot]); }
  uint32_t length(uint64_t ordinal) const { return static_cast<uint32_t>(length_base_ + lengths_[ordinal - 1]); }

  uint64_t size_in_bits() const;
  void write(BitWriter& out) const;
  static PatternTable read(BitReader& in);

 private:
  IntVector ids_;
  bool shared_ = false;  // some vertex carries several ids
  CompressedBitvector group_starts_;
  uint64_t length_base_ = 0;
  IntVector lengths_;
};

struct IndexConfig {
  uint32_t t = 8;
  std::optional<uint64_t> block_size;
  NextLayout layout = NextLayout::kBlocked;
  BitvectorOptions bitvectors;
};

// Bit counts of the serialized index by component. Their sum equals the
// serialized payload (sections without tags, lengths, or byte padding).
struct IndexSizes {
  uint64_t meta = 0;
  uint64_t next_payload = 0;
  uint64_t next_directory = 0;
  uint64_t mark = 0;
  uint64_t fail_membership = 0;
  uint64_t fail_tree = 0;
  uint64_t report_tree = 0;
  uint64_t pattern_table = 0;
  uint64_t total() const {
    return meta + next_payload + next_directory + mark + fail_membership + fail_tree + report_tree + pattern_table;
  }
};

inline constexpr uint32_t kIndexFormatVersion = 1;

// Succinct Aho-Corasick index addressed by XBW vertex numbers.
class CompressedIndex {
 public:
  CompressedIndex() = default;

  // Throws Error(kInvalidArgument) for t < 1. The trie must carry numbering,
  // failure and report links.
  static CompressedIndex encode(const Trie& trie, const IndexConfig& config = {});

  uint64_t edges() const { return m_; }
  uint32_t sigma() const { return sigma_; }
  uint64_t pattern_count() const { return patterns_.pattern_count(); }
  uint64_t marked_count() const { return mark_.ones(); }
  uint32_t t() const { return failure_.t(); }
  uint32_t dense_residue() const { return residue_; }
  uint64_t dense_set_size() const { return failure_.member_count(); }
  bool byte_alphabet() const { return byte_alphabet_; }
  const std::array<Symbol, 256>& alphabet_map() const { return alphabet_; }
  Symbol map_byte(uint8_t byte) const { return alphabet_[byte]; }

  std::optional<uint32_t> next(uint32_t v, Symbol c) const;
  // Requires 1 <= v <= m; returns (parent number, edge letter).
  std::pair<uint32_t, Symbol> parent_edge(uint32_t v) const;
  bool in_dense_set(uint32_t v) const { return failure_.contains(v); }
  std::optional<uint32_t> failure_parent(uint32_t v) const { return failure_.parent(v); }
  // Longest proper suffix of str(v) that is a pattern; 0 when none.
  uint32_t report_parent(uint32_t v) const;
  bool is_marked(uint32_t v) const { return mark_.access(v); }
  // 1-based rank among marked vertices, nullopt when unmarked.
  std::optional<uint64_t> mark_ordinal(uint32_t v) const { return mark_.partial_rank(v); }
  std::vector<uint32_t> pattern_ids_at(uint32_t v) const;
  const PatternTable& patterns() const { return patterns_; }

  const NextEncoding& next_encoding() const { return next_; }
  const SparseFailure& sparse_failure() const { return failure_; }
  const SparseParentTree& report_tree() const { return report_; }
  IndexSizes sizes() const;

  std::vector<uint8_t> serialize() const;
  // Throws Error(kBadMagic / kTruncated / kCorrupt).
  static CompressedIndex deserialize(std::span<const uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  // Throws Error(kIo) when the file cannot be read.
  static CompressedIndex load(const std::filesystem::path& path);

 private:
  friend CompressedIndex build_index(const Dictionary& dict, const IndexConfig& config);
  uint64_t meta_bits() const;
  void write_meta(BitWriter& out) const;

  uint64_t m_ = 0;
  uint32_t sigma_ = 0;
  uint32_t residue_ = 0;
  bool byte_alphabet_ = true;
  std::array<Symbol, 256> alphabet_{};
  NextEncoding next_;
  CompressedBitvector mark_;
  SparseFailure failure_;
  SparseParentTree report_;
  PatternTable patterns_;
};

// Builds the trie and index for a dictionary, carrying its alphabet map.
CompressedIndex build_index(const Dictionary& dict, const IndexConfig& config = {});

}  // namespace acsx
