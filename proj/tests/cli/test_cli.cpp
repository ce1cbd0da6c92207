#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <set>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include "acsx/compressed_index.hpp"
#include "doctest.h"
#include "process.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = ACSX_CLI_PATH;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(ACSX_CLI_WORK) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

testproc::Outcome cli(const std::vector<std::string>& args, const fs::path& dir) {
  std::vector<std::string> argv = {kCli};
  argv.insert(argv.end(), args.begin(), args.end());
  return testproc::run(argv, dir);
}

std::string u32le(uint32_t x) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((x >> (8 * i)) & 0xFF);
  return s;
}

const std::string kWorkedDict = "aaba\naabb\naba\nb\nba\nbbbb\n";

}  // namespace

TEST_CASE("usage errors exit 1") {
  const auto dir = scratch("usage");
  CHECK(cli({}, dir).exit_code == 1);
  CHECK(cli({"scan"}, dir).exit_code == 1);
  CHECK(cli({"frobnicate"}, dir).exit_code == 1);
  testproc::spit(dir / "d.txt", "ab\n");
  CHECK(cli({"build", (dir / "d.txt").string(), "-o", (dir / "x.acsx").string(), "-t", "0"}, dir).exit_code == 1);
  CHECK(cli({"--help"}, dir).exit_code == 0);
}

TEST_CASE("unreadable inputs exit 2") {
  const auto dir = scratch("unreadable");
  CHECK(cli({"build", (dir / "missing.txt").string(), "-o", (dir / "x.acsx").string()}, dir).exit_code == 2);
  testproc::spit(dir / "d.txt", kWorkedDict);
  REQUIRE(cli({"build", (dir / "d.txt").string(), "-o", (dir / "d.acsx").string()}, dir).exit_code == 0);
  CHECK(cli({"scan", (dir / "d.acsx").string(), (dir / "missing.txt").string()}, dir).exit_code == 2);
  CHECK(cli({"stats", (dir / "missing.acsx").string()}, dir).exit_code == 2);
}

TEST_CASE("binary dictionaries") {
  const auto dir = scratch("binary");
  SUBCASE("arbitrary bytes including newlines and zeros") {
    std::string dict = u32le(3) + std::string("a\nb", 3) + u32le(2) + std::string("\0\xff", 2) + u32le(0);
    testproc::spit(dir / "d.bin", dict);
    const auto r = cli({"build", (dir / "d.bin").string(), "--input-mode", "binary", "-o", (dir / "d.acsx").string()},
                       dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("d=2\n") != std::string::npos);
    CHECK(r.err.find("skipped 1 empty") != std::string::npos);
    testproc::spit(dir / "t.bin", std::string("xa\nb\0\xff\0", 8));
    const auto s = cli({"scan", (dir / "d.acsx").string(), (dir / "t.bin").string(), "--starts"}, dir);
    CHECK(s.out == "3\t0\t1\n5\t1\t4\n");
  }
  SUBCASE("truncated prefix exits 3") {
    testproc::spit(dir / "d.bin", u32le(1) + "a" + std::string("\x02\x00", 2));
    CHECK(cli({"build", (dir / "d.bin").string(), "--input-mode", "binary", "-o", (dir / "x").string()}, dir)
              .exit_code == 3);
  }
  SUBCASE("overrunning length exits 3") {
    testproc::spit(dir / "d.bin", u32le(10) + "abc");
    CHECK(cli({"build", (dir / "d.bin").string(), "--input-mode", "binary", "-o", (dir / "x").string()}, dir)
              .exit_code == 3);
  }
}

TEST_CASE("newline dictionaries warn about empty lines and duplicates") {
  const auto dir = scratch("newline");
  testproc::spit(dir / "d.txt", "ab\n\nab\ncd");
  const auto r = cli({"build", (dir / "d.txt").string(), "-o", (dir / "d.acsx").string()}, dir);
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("skipped 1 empty") != std::string::npos);
  CHECK(r.err.find("1 duplicate") != std::string::npos);
  CHECK(r.out.find("d=3\n") != std::string::npos);
  testproc::spit(dir / "empty.txt", "\n\n");
  CHECK(cli({"build", (dir / "empty.txt").string(), "-o", (dir / "e.acsx").string()}, dir).exit_code == 3);
}

TEST_CASE("damaged index files") {
  const auto dir = scratch("damaged");
  testproc::spit(dir / "d.txt", kWorkedDict);
  testproc::spit(dir / "t.txt", "aabab");
  REQUIRE(cli({"build", (dir / "d.txt").string(), "-o", (dir / "d.acsx").string()}, dir).exit_code == 0);
  const std::string good = testproc::slurp(dir / "d.acsx");

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  testproc::spit(dir / "magic.acsx", bad_magic);
  CHECK(cli({"scan", (dir / "magic.acsx").string(), (dir / "t.txt").string()}, dir).exit_code == 4);

  std::string bad_version = good;
  bad_version[4] = static_cast<char>(bad_version[4] + 1);
  testproc::spit(dir / "version.acsx", bad_version);
  CHECK(cli({"scan", (dir / "version.acsx").string(), (dir / "t.txt").string()}, dir).exit_code == 4);

  for (size_t cut : {size_t{10}, good.size() / 2, good.size() - 1}) {
    testproc::spit(dir / "cut.acsx", good.substr(0, cut));
    CAPTURE(cut);
    CHECK(cli({"scan", (dir / "cut.acsx").string(), (dir / "t.txt").string()}, dir).exit_code == 5);
    CHECK(cli({"stats", (dir / "cut.acsx").string()}, dir).exit_code == 5);
  }
}

TEST_CASE("scan formats") {
  const auto dir = scratch("formats");
  testproc::spit(dir / "d.txt", kWorkedDict);
  testproc::spit(dir / "t.txt", "aabab");
  REQUIRE(cli({"build", (dir / "d.txt").string(), "-o", (dir / "d.acsx").string(), "-t", "2"}, dir).exit_code == 0);
  const auto tsv = cli({"scan", (dir / "d.acsx").string(), (dir / "t.txt").string()}, dir);
  // "aabab": b ends at 2 and 4; aaba, aba and ba end at 3.
  CHECK(tsv.out == "2\t3\n3\t0\n3\t2\n3\t4\n4\t3\n");
  const auto bin = cli({"scan", (dir / "d.acsx").string(), (dir / "t.txt").string(), "--format", "binary"}, dir);
  REQUIRE(bin.out.size() == 5 * 12);
  CHECK(static_cast<uint8_t>(bin.out[24]) == 3);
  CHECK(static_cast<uint8_t>(bin.out[24 + 8]) == 2);
  const auto starts = cli({"scan", (dir / "d.acsx").string(), (dir / "t.txt").string(), "--format", "binary",
                           "--starts"},
                          dir);
  CHECK(starts.out.size() == 5 * 20);
  // Output is byte-stable across runs.
  CHECK(cli({"scan", (dir / "d.acsx").string(), (dir / "t.txt").string()}, dir).out == tsv.out);
}

TEST_CASE("stats on a single-pattern index") {
  const auto dir = scratch("stats");
  testproc::spit(dir / "d.txt", "abca\n");
  REQUIRE(cli({"build", (dir / "d.txt").string(), "-o", (dir / "d.acsx").string()}, dir).exit_code == 0);
  const auto r = cli({"stats", (dir / "d.acsx").string(), (dir / "d.txt").string()}, dir);
  REQUIRE(r.exit_code == 0);
  // Path trie: H_0 is the entropy of the multiset {a, a, b, c}.
  CHECK(r.out.find("H0=1.5\n") != std::string::npos);
  CHECK(r.out.find("avg_length=4\n") != std::string::npos);
  testproc::spit(dir / "other.txt", "zz\n");
  CHECK(cli({"stats", (dir / "d.acsx").string(), (dir / "other.txt").string()}, dir).exit_code == 1);
}

TEST_CASE("bench emits agreeing CSV rows") {
  const auto dir = scratch("bench");
  std::mt19937_64 rng(5);
  std::string dict, text(1 << 20, 'a');
  for (int n = 0; n < 200; ++n) {
    std::string p(2 + rng() % 10, 'a');
    for (auto& x : p) x = "ACGT"[rng() % 4];
    dict += p + "\n";
  }
  for (auto& x : text) x = "ACGT"[rng() % 4];
  testproc::spit(dir / "d.txt", dict);
  testproc::spit(dir / "t.txt", text);
  testproc::spit(dir / "empty.txt", "");

  const auto r = cli({"bench", (dir / "d.txt").string(), (dir / "t.txt").string(), "--engines", "cblz,cblz8,smp",
                      "-r", "1"},
                     dir);
  REQUIRE(r.exit_code == 0);
  const auto rows = testproc::lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "engine,t,median_ns,occ,index_bits");
  std::set<std::string> occ;
  for (size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream row(rows[i]);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    occ.insert(cells[3]);
  }
  CHECK(occ.size() == 1);

  const auto empty = cli({"bench", (dir / "d.txt").string(), (dir / "empty.txt").string(), "--engines", "cblz",
                          "-r", "1"},
                         dir);
  REQUIRE(empty.exit_code == 0);
  CHECK(testproc::lines(empty.out).at(1).find(",0,") != std::string::npos);

  // Failure-component bits shrink as t grows from 2 on. At t = 1 every
  // vertex is dense, so the membership bitvector is all ones and nearly free.
  const auto sweep = cli({"bench", (dir / "d.txt").string(), (dir / "empty.txt").string(), "--engines",
                          "cblz1,cblz2,cblz4,cblz8,cblz16", "-r", "1"},
                         dir);
  REQUIRE(sweep.exit_code == 0);
  uint64_t previous = UINT64_MAX;
  const auto sweep_rows = testproc::lines(sweep.out);
  REQUIRE(sweep_rows.size() == 6);
  for (size_t i = 2; i < sweep_rows.size(); ++i) {
    const std::string& line = sweep_rows[i];
    const uint64_t bits = std::stoull(line.substr(line.rfind(',') + 1));
    CHECK(bits <= previous);
    previous = bits;
  }
  CHECK(cli({"bench", (dir / "d.txt").string(), (dir / "t.txt").string(), "--engines", "bogus"}, dir).exit_code == 1);
}
