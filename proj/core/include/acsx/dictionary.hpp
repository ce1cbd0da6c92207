#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace acsx {

using Symbol = uint32_t;
inline constexpr Symbol kNoSymbol = ~Symbol{0};

// Validated pattern set over an effective alphabet [0..sigma).
//
// Byte dictionaries remap the used byte values to [0..sigma) in increasing
// byte order, so symbol order equals byte order. Symbol dictionaries use the
// identity map and carry their alphabet size explicitly.
class Dictionary {
 public:
  // Throws Error(kEmptyDictionary) for no patterns, Error(kEmptyPattern) for "".
  static Dictionary from_bytes(const std::vector<std::string>& patterns);
  // Every symbol must be < sigma.
  static Dictionary from_symbols(std::vector<std::vector<Symbol>> patterns, uint32_t sigma);

  size_t size() const { return patterns_.size(); }
  uint32_t sigma() const { return sigma_; }
  const std::vector<Symbol>& pattern(size_t id) const { return patterns_[id]; }
  uint32_t length(size_t id) const { return static_cast<uint32_t>(patterns_[id].size()); }
  uint64_t total_length() const;

  bool byte_alphabet() const { return byte_alphabet_; }
  // Byte -> symbol, kNoSymbol for bytes absent from every pattern.
  const std::array<Symbol, 256>& alphabet_map() const { return map_; }
  Symbol map_byte(uint8_t byte) const { return map_[byte]; }

 private:
  std::vector<std::vector<Symbol>> patterns_;
  uint32_t sigma_ = 0;
  bool byte_alphabet_ = true;
  std::array<Symbol, 256> map_{};
};

// Byte b maps to b when b < sigma, to kNoSymbol otherwise.
std::array<Symbol, 256> identity_alphabet_map(uint32_t sigma);

}  // namespace acsx
