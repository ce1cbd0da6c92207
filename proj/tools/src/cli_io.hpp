#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "acsx/dictionary.hpp"

namespace acsx::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kUnreadable = 2,
  kMalformedDictionary = 3,
  kBadMagic = 4,
  kTruncated = 5,
  kDisagreement = 6,
};

// Thrown from command bodies; main() turns it into a message and exit code.
struct Failure {
  int code;
  std::string message;
};

enum class DictionaryFormat { kNewline, kBinary };

struct DictionaryLoad {
  std::vector<std::string> patterns;
  uint64_t skipped_empty = 0;
  uint64_t duplicates = 0;
};

// Newline mode splits on 0x0A and skips empty lines. Binary mode reads
// records of a little-endian u32 length followed by that many bytes; empty
// records are skipped.
DictionaryLoad read_dictionary(const std::filesystem::path& path, DictionaryFormat format);

// Reads a dictionary, prints warnings to stderr, and builds it. Fails with
// kMalformedDictionary when nothing usable remains.
Dictionary load_dictionary(const std::filesystem::path& path, DictionaryFormat format);

std::vector<uint8_t> read_file(const std::filesystem::path& path);

// Calls `consume` with successive chunks of at most `chunk` bytes.
template <class Consume>
void stream_file(const std::filesystem::path& path, size_t chunk, Consume&& consume) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Failure{kUnreadable, "cannot open " + path.string()};
  std::vector<uint8_t> buffer(chunk);
  for (;;) {
    const size_t got = std::fread(buffer.data(), 1, buffer.size(), f);
    if (got > 0) consume(std::span<const uint8_t>(buffer.data(), got));
    if (got < buffer.size()) break;
  }
  const bool failed = std::ferror(f) != 0;
  std::fclose(f);
  if (failed) throw Failure{kUnreadable, "read error on " + path.string()};
}

// Buffered stdout writer for large occurrence streams.
class OutputBuffer {
 public:
  explicit OutputBuffer(std::FILE* out) : out_(out) { buffer_.reserve(kCapacity); }
  ~OutputBuffer() { flush(); }
  void append(std::string_view s) {
    buffer_.append(s);
    if (buffer_.size() >= kCapacity) flush();
  }
  void append_number(uint64_t value);
  void append_le(uint64_t value, unsigned bytes);
  void flush();

 private:
  static constexpr size_t kCapacity = 1 << 16;
  std::FILE* out_;
  std::string buffer_;
};

}  // namespace acsx::cli
