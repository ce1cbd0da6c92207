#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "acsx/compressed_bitvector.hpp"
#include "doctest.h"

using acsx::BitvectorOptions;
using acsx::CompressedBitvector;

namespace {

std::vector<bool> random_bits(size_t n, double density, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<bool> bits(n);
  for (size_t i = 0; i < n; ++i) bits[i] = coin(rng);
  return bits;
}

// Checks every query against a linear scan of the plain bit sequence.
void check_against_scan(const std::vector<bool>& bits, const CompressedBitvector& v) {
  REQUIRE(v.length() == bits.size());
  uint64_t ones = 0;
  std::vector<uint64_t> positions;
  for (uint64_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      ++ones;
      positions.push_back(i);
    }
    const std::optional<uint64_t> pr = v.partial_rank(i);
    REQUIRE(pr.has_value() == bits[i]);
    if (pr) REQUIRE(*pr == ones);
    REQUIRE(v.rank_all(i) == ones);
  }
  REQUIRE(v.ones() == ones);
  for (uint64_t j = 1; j <= ones; ++j) REQUIRE(v.select(j) == positions[j - 1]);
}

CompressedBitvector round_trip(const CompressedBitvector& v) {
  acsx::BitWriter out;
  v.write(out);
  REQUIRE(out.size() == v.size_in_bits());
  const std::vector<uint8_t> bytes = out.to_bytes();
  acsx::BitReader in(bytes);
  return CompressedBitvector::read(in);
}

const BitvectorOptions kPolicies[] = {
    {BitvectorOptions::Policy::kClassOffset, 32},
    {BitvectorOptions::Policy::kGapCoded, 32},
    {BitvectorOptions::Policy::kGapCoded, 1},
    {BitvectorOptions::Policy::kAuto, 8},
};

}  // namespace

TEST_CASE("B_a column of the worked example") {
  std::vector<bool> bits(13, false);
  for (int p : {0, 1, 6, 7, 8}) bits[p] = true;
  for (const auto& opt : kPolicies) {
    const CompressedBitvector v = acsx::build_compressed(bits, opt);
    CHECK(v.ones() == 5);
    CHECK(v.partial_rank(6) == std::optional<uint64_t>(3));
    CHECK_FALSE(v.partial_rank(2).has_value());
    CHECK(v.select(3) == 6);
    CHECK(v.rank_all(2) == 2);
    CHECK(v.partial_rank(0) == std::optional<uint64_t>(1));
    check_against_scan(bits, v);
  }
}

TEST_CASE("empty and degenerate vectors") {
  for (const auto& opt : kPolicies) {
    const CompressedBitvector empty = acsx::build_compressed({}, opt);
    CHECK(empty.length() == 0);
    CHECK(empty.ones() == 0);
    CHECK_THROWS_AS(empty.select(1), std::out_of_range);
    CHECK_THROWS_AS(empty.partial_rank(0), std::out_of_range);
    CHECK(round_trip(empty).length() == 0);

    const CompressedBitvector zeros = acsx::build_compressed(std::vector<bool>(200, false), opt);
    CHECK(zeros.rank_all(199) == 0);
    CHECK_THROWS_AS(zeros.select(1), std::out_of_range);

    const CompressedBitvector full = acsx::build_compressed(std::vector<bool>(300, true), opt);
    check_against_scan(std::vector<bool>(300, true), full);

    std::vector<bool> first(100, false);
    first[0] = true;
    const CompressedBitvector f = acsx::build_compressed(first, opt);
    CHECK(f.select(1) == 0);
    CHECK(f.partial_rank(0) == std::optional<uint64_t>(1));
    CHECK(f.rank_all(50) == 1);
    CHECK_THROWS_AS(f.select(0), std::out_of_range);
    CHECK_THROWS_AS(f.select(2), std::out_of_range);
  }
}

TEST_CASE("random vectors agree with a linear scan") {
  const double densities[] = {0.001, 0.03, 0.2, 0.5, 0.9};
  uint64_t seed = 7;
  for (double d : densities) {
    const auto bits = random_bits(100000, d, seed++);
    for (const auto& opt : kPolicies) {
      const CompressedBitvector v = acsx::build_compressed(bits, opt);
      check_against_scan(bits, v);
      check_against_scan(bits, round_trip(v));
    }
  }
}

TEST_CASE("long gaps and runs cross word boundaries") {
  std::vector<bool> bits(5000, false);
  for (uint64_t p : {3u, 700u, 701u, 4998u, 4999u}) bits[p] = true;
  for (uint64_t p = 1000; p < 1300; ++p) bits[p] = true;
  for (const auto& opt : kPolicies) check_against_scan(bits, round_trip(acsx::build_compressed(bits, opt)));
}

TEST_CASE("size stays near the binomial bound") {
  for (double d : {0.01, 0.1, 0.5}) {
    const auto bits = random_bits(200000, d, 99);
    const CompressedBitvector v = acsx::build_compressed(bits);
    const double n = static_cast<double>(v.length());
    const double m = static_cast<double>(v.ones());
    const double log_binom = (std::lgamma(n + 1) - std::lgamma(m + 1) - std::lgamma(n - m + 1)) / std::log(2.0);
    // Class/offset pays a 6-bit class plus under one rounding bit per 63-bit block.
    // Golomb-coded gaps stay within 0.05 bits per one of the binomial bound.
    const double blocks = std::ceil(n / 63.0);
    const double slack = v.encoding() == acsx::BitvectorEncoding::kClassOffset ? 7.0 * blocks : 0.05 * m + 64;
    CHECK(static_cast<double>(v.payload_bits()) <= log_binom + slack);
    CHECK(v.size_in_bits() == v.payload_bits() + v.directory_bits() + CompressedBitvector::kHeaderBits);
  }
}

TEST_CASE("auto policy never exceeds either fixed encoding") {
  for (double d : {0.002, 0.05, 0.3, 0.7}) {
    const auto bits = random_bits(50000, d, 1234);
    const auto a = acsx::build_compressed(bits, {BitvectorOptions::Policy::kAuto, 32});
    const auto c = acsx::build_compressed(bits, {BitvectorOptions::Policy::kClassOffset, 32});
    const auto g = acsx::build_compressed(bits, {BitvectorOptions::Policy::kGapCoded, 32});
    CHECK(a.size_in_bits() == std::min(c.size_in_bits(), g.size_in_bits()));
  }
}
