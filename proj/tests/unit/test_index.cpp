#include <random>
#include <string>
#include <vector>

#include "acsx/compressed_index.hpp"
#include "acsx/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace {

const std::vector<std::string> kWorked = {"aaba", "aabb", "aba", "b", "ba", "bbbb"};

// Exhaustively compares index navigation with the explicit trie.
void check_against_trie(const acsx::Trie& trie, const acsx::CompressedIndex& index) {
  const uint32_t n = trie.vertex_count();
  REQUIRE(index.edges() == trie.edge_count());
  REQUIRE(index.marked_count() == trie.marked_count());
  for (uint32_t num = 0; num < n; ++num) {
    const uint32_t v = trie.by_num(num);
    for (acsx::Symbol c = 0; c < trie.sigma(); ++c) {
      const auto child = trie.child(v, c);
      const auto got = index.next(num, c);
      REQUIRE(got.has_value() == child.has_value());
      if (child) {
        REQUIRE(*got == trie.num(*child));
        REQUIRE(index.parent_edge(*got) == std::pair<uint32_t, acsx::Symbol>{num, c});
      }
    }
    REQUIRE(index.is_marked(num) == trie.marked(v));
    REQUIRE(index.pattern_ids_at(num) == (trie.marked(v) ? trie.pattern_ids(v) : std::vector<uint32_t>{}));
    if (trie.marked(v)) REQUIRE(index.patterns().length(*index.mark_ordinal(num)) == trie.depth(v));
    if (num == 0) {
      REQUIRE_FALSE(index.failure_parent(0).has_value());
      continue;
    }
    REQUIRE(index.report_parent(num) == trie.num(trie.report(v)));
    const bool in_w = index.in_dense_set(num);
    REQUIRE(in_w == (trie.depth(v) % index.t() == index.dense_residue()));
    const auto fp = index.failure_parent(num);
    REQUIRE(fp.has_value() == in_w);
    if (in_w) REQUIRE(*fp == trie.num(trie.failure(v)));
  }
}

acsx::CompressedIndex round_trip(const acsx::CompressedIndex& index) {
  return acsx::CompressedIndex::deserialize(index.serialize());
}

}  // namespace

TEST_CASE("worked example transition columns") {
  const auto dict = acsx::Dictionary::from_bytes(kWorked);
  const acsx::Trie trie = acsx::build_full_trie(dict);
  const std::string col_a = "1100001110000";
  const std::string col_b = "1110001011010";
  for (auto layout : {acsx::NextLayout::kBlocked, acsx::NextLayout::kMonolithic}) {
    for (uint64_t block : {1u, 3u, 13u, 200u}) {
      acsx::IndexConfig config;
      config.t = 1;
      config.layout = layout;
      config.block_size = block;
      const auto index = acsx::CompressedIndex::encode(trie, config);
      for (uint64_t i = 0; i < 13; ++i) {
        CHECK(index.next_encoding().partial_rank(i).has_value() == (col_a[i] == '1'));
        CHECK(index.next_encoding().partial_rank(13 + i).has_value() == (col_b[i] == '1'));
      }
      const acsx::Symbol a = dict.map_byte('a'), b = dict.map_byte('b');
      CHECK(index.next(6, a) == std::optional<uint32_t>(3));
      CHECK(index.next(1, b) == std::optional<uint32_t>(7));
      CHECK_FALSE(index.next(2, a).has_value());
      CHECK(index.parent_edge(7) == std::pair<uint32_t, acsx::Symbol>{1, b});
      CHECK_THROWS_AS(index.parent_edge(0), std::out_of_range);
      for (uint32_t v : {3u, 4u, 5u, 6u, 10u, 12u}) CHECK(index.is_marked(v));
      for (uint32_t v : {0u, 1u, 2u, 7u, 8u, 9u, 11u}) CHECK_FALSE(index.is_marked(v));
      check_against_trie(trie, index);
      check_against_trie(trie, round_trip(index));
    }
  }
}

TEST_CASE("single pattern index") {
  const auto dict = acsx::Dictionary::from_bytes({"a"});
  for (uint32_t t : {1u, 2u, 8u}) {
    acsx::IndexConfig config;
    config.t = t;
    const auto index = acsx::build_index(dict, config);
    CHECK(index.next(0, 0) == std::optional<uint32_t>(1));
    CHECK(index.report_parent(1) == 0);
    if (index.in_dense_set(1)) CHECK(index.failure_parent(1) == std::optional<uint32_t>(0));
  }
  acsx::IndexConfig bad;
  bad.t = 0;
  CHECK_THROWS_AS(acsx::build_index(dict, bad), acsx::Error);
}

TEST_CASE("random tries: every query matches the explicit trie") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 60; ++round) {
    const uint32_t sigma = std::vector<uint32_t>{2, 4, 16, 256}[round % 4];
    const auto words = oracle::random_patterns(rng, sigma, 1 + rng() % 60, 1 + rng() % 15);
    const acsx::Trie trie = acsx::build_full_trie(acsx::Dictionary::from_symbols(words, sigma));
    acsx::IndexConfig config;
    config.t = std::vector<uint32_t>{1, 2, 4, 8, 16}[round % 5];
    config.layout = round % 3 == 0 ? acsx::NextLayout::kMonolithic : acsx::NextLayout::kBlocked;
    if (round % 2) config.block_size = 1 + rng() % 40;
    config.bitvectors.policy = std::vector<acsx::BitvectorOptions::Policy>{
        acsx::BitvectorOptions::Policy::kAuto, acsx::BitvectorOptions::Policy::kClassOffset,
        acsx::BitvectorOptions::Policy::kGapCoded}[round % 3];
    const auto index = acsx::CompressedIndex::encode(trie, config);
    check_against_trie(trie, index);
    const auto loaded = round_trip(index);
    check_against_trie(trie, loaded);
    CHECK(loaded.serialize() == index.serialize());
  }
}

TEST_CASE("blocked and monolithic transition arrays answer identically") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 20; ++round) {
    const uint32_t sigma = 2 + rng() % 20;
    const auto words = oracle::random_patterns(rng, sigma, 40, 10);
    const acsx::Trie trie = acsx::build_full_trie(acsx::Dictionary::from_symbols(words, sigma));
    acsx::IndexConfig mono;
    mono.layout = acsx::NextLayout::kMonolithic;
    acsx::IndexConfig blocked;
    blocked.block_size = 1 + rng() % 50;
    const auto a = acsx::CompressedIndex::encode(trie, mono).next_encoding();
    const auto b = acsx::CompressedIndex::encode(trie, blocked).next_encoding();
    const uint64_t len = uint64_t{sigma} * (trie.edge_count() + 1);
    uint64_t block_ones = 0;
    for (uint64_t g = 0; g < b.block_count(); ++g) block_ones += b.block_ones(g);
    CHECK(block_ones == trie.edge_count());
    for (uint64_t g = 0; g < len; ++g) REQUIRE(a.partial_rank(g) == b.partial_rank(g));
    for (uint64_t j = 1; j <= trie.edge_count(); ++j) REQUIRE(a.select(j) == b.select(j));
  }
}

TEST_CASE("dense subset and transformed failure tree") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 100; ++round) {
    const uint32_t sigma = std::vector<uint32_t>{2, 4, 16, 256}[round % 4];
    const auto words = oracle::random_patterns(rng, sigma, 1 + rng() % 50, 1 + rng() % 20);
    const acsx::Trie trie = acsx::build_full_trie(acsx::Dictionary::from_symbols(words, sigma));
    for (uint32_t t : {1u, 2u, 4u, 8u, 16u}) {
      const auto subset = acsx::choose_dense_subset(trie, t);
      std::vector<bool> in_w(trie.vertex_count(), false);
      for (uint32_t n : subset.nums) in_w[trie.by_num(n)] = true;
      CHECK(subset.nums.size() <= (trie.vertex_count() + t - 1) / t + 1);
      for (uint32_t v = 0; v < trie.vertex_count(); ++v) {
        uint32_t u = v, steps = 0;
        while (!in_w[u]) {
          u = trie.parent(u);
          ++steps;
        }
        REQUIRE(steps < t);
      }
      const auto parent = acsx::transformed_failure_tree(trie, subset);
      CHECK(acsx::is_dfs_preorder(parent));
      for (uint32_t n : subset.nums) {
        if (n != 0) REQUIRE(parent[n] == trie.num(trie.failure(trie.by_num(n))));
      }
      if (t == 1) {
        for (uint32_t v = 1; v < trie.vertex_count(); ++v) REQUIRE(parent[trie.num(v)] == trie.num(trie.failure(v)));
      }
    }
  }
}

TEST_CASE("worked example transformed tree for t = 2") {
  const auto dict = acsx::Dictionary::from_bytes(kWorked);
  const acsx::Trie trie = acsx::build_full_trie(dict);
  const auto subset = acsx::choose_dense_subset(trie, 2);
  // Depths: 0:{root} 1:{a,b} 2:{aa,ab,ba,bb} 3:{aab,aba,bbb} 4:{aaba,aabb,bbbb}.
  // Even depths hold 8 vertices, odd depths 5; the odd class is chosen.
  CHECK(subset.residue == 1);
  CHECK(subset.nums == std::vector<uint32_t>{0, 1, 4, 6, 8, 11});
  const auto parent = acsx::transformed_failure_tree(trie, subset);
  // Important: root, plus failure targets of W = {root, a, b, aab, aba, bbb}:
  // failure(aab) = ab (7), failure(aba) = ba (3), failure(bbb) = bb (9).
  CHECK(parent[1] == 0);
  CHECK(parent[6] == 0);
  CHECK(parent[3] == 0);
  CHECK(parent[7] == 0);
  CHECK(parent[9] == 0);
  CHECK(parent[4] == 3);
  CHECK(parent[8] == 7);
  CHECK(parent[11] == 9);
  for (uint32_t dropped : {2u, 5u, 10u, 12u}) CHECK(parent[dropped] == acsx::kNoVertex);
  CHECK(acsx::is_dfs_preorder(parent));
}

TEST_CASE("report chains enumerate marked suffixes") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 40; ++round) {
    const uint32_t sigma = std::vector<uint32_t>{2, 3, 4}[round % 3];
    const auto words = oracle::random_patterns(rng, sigma, 1 + rng() % 30, 1 + rng() % 8);
    const acsx::Trie trie = acsx::build_full_trie(acsx::Dictionary::from_symbols(words, sigma));
    const auto index = acsx::CompressedIndex::encode(trie);
    for (uint32_t v = 1; v < trie.vertex_count(); ++v) {
      std::vector<uint32_t> chain;
      for (uint32_t u = index.report_parent(trie.num(v)); u != 0; u = index.report_parent(u)) chain.push_back(u);
      std::vector<uint32_t> expected;
      for (uint32_t u : oracle::brute_marked_suffixes(trie, v)) expected.push_back(trie.num(u));
      REQUIRE(chain == expected);
    }
  }
}

TEST_CASE("malformed index bytes are rejected") {
  const auto index = acsx::build_index(acsx::Dictionary::from_bytes(kWorked));
  auto bytes = index.serialize();
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(acsx::CompressedIndex::deserialize(bad_magic), acsx::Error);
  auto bad_version = bytes;
  bad_version[4] = 9;
  try {
    acsx::CompressedIndex::deserialize(bad_version);
    FAIL("accepted wrong version");
  } catch (const acsx::Error& e) {
    CHECK(e.code() == acsx::ErrorCode::kBadMagic);
  }
  for (size_t cut : {size_t{6}, size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    std::vector<uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    try {
      acsx::CompressedIndex::deserialize(truncated);
      FAIL("accepted truncated index");
    } catch (const acsx::Error& e) {
      CHECK(e.code() == acsx::ErrorCode::kTruncated);
    }
  }
}

TEST_CASE("space accounting matches the serialized payload") {
  std::mt19937_64 rng(3);
  for (auto layout : {acsx::NextLayout::kBlocked, acsx::NextLayout::kMonolithic}) {
    const auto words = oracle::random_patterns(rng, 16, 200, 12);
    acsx::IndexConfig config;
    config.layout = layout;
    const auto index = acsx::build_index(acsx::Dictionary::from_bytes(oracle::to_strings(words)), config);
    const auto s = index.sizes();
    const uint64_t framing_bytes = 8 + 6 * 12;
    const uint64_t file_bits = 8 * (index.serialize().size() - framing_bytes);
    CHECK(s.total() <= file_bits);
    CHECK(file_bits < s.total() + 6 * 8);
    CHECK(index.marked_count() == index.patterns().vertex_count());
  }
}
