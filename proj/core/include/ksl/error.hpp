#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksl {

enum class ErrorCode {
  kDisconnectedGraph,
  kNonPositiveWeight,
  kSelfLoop,
  kDuplicateEdge,
  kVertexOutOfRange,
  kParseError,
  kValueTooWide,
  kTapeExhausted,
  kInstanceTooLarge,
  kScheduleMismatch,
  kMalformedDecomposition,
  kNoIntersection,
  kNoServerAtAddress,
  kNoLabeledServerOnRootPath,
  kCorruptAdvice,
  kMalformedSpanner,
  kPathTooShort,
  kTauOutOfRange,
  kBadPermutation,
  kInvalidSequence,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ksl
