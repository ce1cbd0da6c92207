#include <random>
#include <set>
#include <string>
#include <vector>

#include "acsx/error.hpp"
#include "acsx/trie.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace {

const std::vector<std::string> kWorked = {"aaba", "aabb", "aba", "b", "ba", "bbbb"};

acsx::Trie random_trie(std::mt19937_64& rng, uint32_t sigma, size_t count, size_t max_len) {
  return acsx::build_full_trie(acsx::Dictionary::from_symbols(oracle::random_patterns(rng, sigma, count, max_len), sigma));
}

}  // namespace

TEST_CASE("worked example trie shape and numbering") {
  const auto dict = acsx::Dictionary::from_bytes(kWorked);
  const acsx::Trie trie = acsx::build_full_trie(dict);
  CHECK(trie.edge_count() == 12);
  CHECK(trie.vertex_count() == 13);
  CHECK(trie.marked_count() == 6);
  const std::vector<std::string> by_num = {"",   "a",   "aa", "ba",   "aba", "aaba", "b",
                                           "ab", "aab", "bb", "aabb", "bbb", "bbbb"};
  for (uint32_t n = 0; n < by_num.size(); ++n) {
    CAPTURE(by_num[n]);
    CHECK(trie.num(oracle::find_vertex(trie, dict, by_num[n])) == n);
  }
  const auto at = [&](const std::string& s) { return oracle::find_vertex(trie, dict, s); };
  // "aba" is the longest proper suffix of "aaba" present in the trie.
  CHECK(trie.failure(at("aaba")) == at("aba"));
  CHECK(trie.failure(at("aaba")) == oracle::brute_failure(trie, at("aaba")));
  CHECK(trie.num(trie.failure(at("aaba"))) == 4);
  CHECK(trie.failure(at("aba")) == at("ba"));
  CHECK(trie.report(at("aba")) == at("ba"));
  CHECK(trie.report(at("aa")) == acsx::Trie::kRoot);
  CHECK(verify_dfs_property(trie));
}

TEST_CASE("single pattern trie") {
  const acsx::Trie trie = acsx::build_full_trie(acsx::Dictionary::from_bytes({"a"}));
  CHECK(trie.edge_count() == 1);
  CHECK(trie.marked(1));
  CHECK(trie.num(0) == 0);
  CHECK(trie.failure(1) == 0);
  CHECK(verify_dfs_property(trie));
}

TEST_CASE("dictionary validation") {
  CHECK_THROWS_AS(acsx::Dictionary::from_bytes({}), acsx::Error);
  CHECK_THROWS_AS(acsx::Dictionary::from_bytes({"ab", ""}), acsx::Error);
  CHECK_THROWS_AS(acsx::Dictionary::from_symbols({{0, 5}}, 3), acsx::Error);
  const auto dict = acsx::Dictionary::from_bytes({"zb", "b", "zb"});
  CHECK(dict.sigma() == 2);
  CHECK(dict.map_byte('b') == 0);
  CHECK(dict.map_byte('z') == 1);
  CHECK(dict.map_byte('a') == acsx::kNoSymbol);
  const acsx::Trie trie = acsx::build_full_trie(dict);
  CHECK(trie.pattern_vertex(0) == trie.pattern_vertex(2));
  CHECK(trie.pattern_ids(trie.pattern_vertex(0)) == std::vector<uint32_t>{0, 2});
  CHECK(trie.marked_count() == 2);
}

TEST_CASE("random tries agree with brute-force oracles") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 120; ++round) {
    const uint32_t sigma = std::vector<uint32_t>{2, 3, 4, 16, 256}[round % 5];
    const size_t count = 1 + rng() % 100;
    const acsx::Trie trie = random_trie(rng, sigma, count, 1 + rng() % 12);
    const auto num = oracle::sorted_numbering(trie);
    uint64_t total_len = 0;
    for (uint32_t v = 0; v < trie.vertex_count(); ++v) {
      REQUIRE(trie.num(v) == num[v]);
      REQUIRE(trie.by_num(num[v]) == v);
      if (v == 0) continue;
      REQUIRE(trie.failure(v) == oracle::brute_failure(trie, v));
      REQUIRE(trie.depth(trie.failure(v)) < trie.depth(v));
      const auto suffixes = oracle::brute_marked_suffixes(trie, v);
      REQUIRE(trie.report(v) == (suffixes.empty() ? acsx::Trie::kRoot : suffixes.front()));
    }
    for (uint32_t id = 0; id < trie.pattern_count(); ++id) total_len += trie.depth(trie.pattern_vertex(id));
    CHECK(trie.edge_count() <= total_len);
    CHECK(verify_dfs_property(trie));
    std::set<uint32_t> report_internal;
    for (uint32_t v = 1; v < trie.vertex_count(); ++v) report_internal.insert(trie.report(v));
    CHECK(report_internal.size() <= trie.marked_count() + 1);
  }
}

TEST_CASE("trie recognizes exactly the dictionary") {
  std::mt19937_64 rng(5);
  const auto words = oracle::random_patterns(rng, 4, 100, 8);
  const auto dict = acsx::Dictionary::from_symbols(words, 4);
  const acsx::Trie trie = acsx::build_full_trie(dict);
  std::set<oracle::Word> members(words.begin(), words.end());
  for (uint32_t v = 0; v < trie.vertex_count(); ++v) {
    CHECK(trie.marked(v) == (members.count(oracle::str_of(trie, v)) == 1));
  }
}

TEST_CASE("preorder checker rejects non-preorder numberings") {
  const uint32_t none = acsx::kNoVertex;
  CHECK(acsx::is_dfs_preorder(std::vector<uint32_t>{none, 0, 1, 0, 3}));
  CHECK(acsx::is_dfs_preorder(std::vector<uint32_t>{none, 0, none, 1, 0}));
  CHECK_FALSE(acsx::is_dfs_preorder(std::vector<uint32_t>{none, 0, 0, 1}));
  CHECK_FALSE(acsx::is_dfs_preorder(std::vector<uint32_t>{none, 2, 0}));
}
