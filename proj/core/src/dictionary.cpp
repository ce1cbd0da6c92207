#include "acsx/dictionary.hpp"

#include "acsx/error.hpp"

namespace acsx {

std::array<Symbol, 256> identity_alphabet_map(uint32_t sigma) {
  std::array<Symbol, 256> map{};
  for (uint32_t b = 0; b < 256; ++b) map[b] = b < sigma ? b : kNoSymbol;
  return map;
}

Dictionary Dictionary::from_bytes(const std::vector<std::string>& patterns) {
  if (patterns.empty()) throw Error(ErrorCode::kEmptyDictionary, "dictionary has no patterns");
  std::array<bool, 256> used{};
  for (const std::string& p : patterns) {
    if (p.empty()) throw Error(ErrorCode::kEmptyPattern, "dictionary contains an empty pattern");
    for (unsigned char ch : p) used[ch] = true;
  }
  Dictionary dict;
  dict.map_.fill(kNoSymbol);
  for (unsigned b = 0; b < 256; ++b) {
    if (used[b]) dict.map_[b] = dict.sigma_++;
  }
  dict.patterns_.reserve(patterns.size());
  for (const std::string& p : patterns) {
    std::vector<Symbol> symbols(p.size());
    for (size_t i = 0; i < p.size(); ++i) symbols[i] = dict.map_[static_cast<unsigned char>(p[i])];
    dict.patterns_.push_back(std::move(symbols));
  }
  return dict;
}

Dictionary Dictionary::from_symbols(std::vector<std::vector<Symbol>> patterns, uint32_t sigma) {
  if (patterns.empty()) throw Error(ErrorCode::kEmptyDictionary, "dictionary has no patterns");
  if (sigma == 0) throw Error(ErrorCode::kInvalidArgument, "alphabet size must be positive");
  for (const auto& p : patterns) {
    if (p.empty()) throw Error(ErrorCode::kEmptyPattern, "dictionary contains an empty pattern");
    for (Symbol s : p) {
      if (s >= sigma) throw Error(ErrorCode::kInvalidArgument, "symbol outside the alphabet");
    }
  }
  Dictionary dict;
  dict.patterns_ = std::move(patterns);
  dict.sigma_ = sigma;
  dict.byte_alphabet_ = false;
  dict.map_ = identity_alphabet_map(sigma);
  return dict;
}

uint64_t Dictionary::total_length() const {
  uint64_t total = 0;
  for (const auto& p : patterns_) total += p.size();
  return total;
}

}  // namespace acsx
