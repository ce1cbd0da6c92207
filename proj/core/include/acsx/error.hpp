#pragma once

#include <stdexcept>
#include <string>

namespace acsx {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyDictionary,
  kEmptyPattern,
  kIo,
  kMalformedDictionary,
  kBadMagic,
  kTruncated,
  kCorrupt,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace acsx
