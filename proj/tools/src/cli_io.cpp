#include "cli_io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include "acsx/error.hpp"

namespace acsx::cli {

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUnreadable, "cannot open " + path.string()};
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Failure{kUnreadable, "read error on " + path.string()};
  return bytes;
}

DictionaryLoad read_dictionary(const std::filesystem::path& path, DictionaryFormat format) {
  const std::vector<uint8_t> bytes = read_file(path);
  DictionaryLoad load;
  auto add = [&](std::string pattern) {
    if (pattern.empty()) {
      ++load.skipped_empty;
      return;
    }
    load.patterns.push_back(std::move(pattern));
  };
  if (format == DictionaryFormat::kNewline) {
    size_t start = 0;
    for (size_t i = 0; i <= bytes.size(); ++i) {
      if (i == bytes.size() || bytes[i] == '\n') {
        // A final newline does not open an empty trailing pattern.
        if (i == bytes.size() && start == i) break;
        add(std::string(bytes.begin() + static_cast<std::ptrdiff_t>(start), bytes.begin() + static_cast<std::ptrdiff_t>(i)));
        start = i + 1;
      }
    }
  } else {
    size_t pos = 0;
    while (pos < bytes.size()) {
      if (bytes.size() - pos < 4) {
        throw Failure{kMalformedDictionary, "truncated length prefix at byte " + std::to_string(pos)};
      }
      const uint32_t len = uint32_t{bytes[pos]} | uint32_t{bytes[pos + 1]} << 8 | uint32_t{bytes[pos + 2]} << 16 |
                           uint32_t{bytes[pos + 3]} << 24;
      pos += 4;
      if (bytes.size() - pos < len) {
        throw Failure{kMalformedDictionary, "pattern at byte " + std::to_string(pos - 4) + " overruns the file"};
      }
      add(std::string(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + len)));
      pos += len;
    }
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& p : load.patterns) {
    if (!seen.insert(p).second) ++load.duplicates;
  }
  return load;
}

Dictionary load_dictionary(const std::filesystem::path& path, DictionaryFormat format) {
  const DictionaryLoad load = read_dictionary(path, format);
  if (load.skipped_empty > 0) std::cerr << "warning: skipped " << load.skipped_empty << " empty pattern(s)\n";
  if (load.duplicates > 0) std::cerr << "warning: " << load.duplicates << " duplicate pattern(s)\n";
  if (load.patterns.empty()) throw Failure{kMalformedDictionary, "dictionary has no non-empty patterns"};
  try {
    return Dictionary::from_bytes(load.patterns);
  } catch (const Error& e) {
    throw Failure{kMalformedDictionary, e.what()};
  }
}

void OutputBuffer::append_number(uint64_t value) {
  char digits[24];
  const auto result = std::to_chars(digits, digits + sizeof digits, value);
  append(std::string_view(digits, static_cast<size_t>(result.ptr - digits)));
}

void OutputBuffer::append_le(uint64_t value, unsigned bytes) {
  for (unsigned i = 0; i < bytes; ++i) buffer_.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  if (buffer_.size() >= kCapacity) flush();
}

void OutputBuffer::flush() {
  if (!buffer_.empty()) std::fwrite(buffer_.data(), 1, buffer_.size(), out_);
  buffer_.clear();
  std::fflush(out_);
}

}  // namespace acsx::cli
