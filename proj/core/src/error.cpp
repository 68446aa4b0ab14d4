#include "ksl/error.hpp"

namespace ksl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kVertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValueTooWide: return "ValueTooWide";
    case ErrorCode::kTapeExhausted: return "TapeExhausted";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kScheduleMismatch: return "ScheduleMismatch";
    case ErrorCode::kMalformedDecomposition: return "MalformedDecomposition";
    case ErrorCode::kNoIntersection: return "NoIntersection";
    case ErrorCode::kNoServerAtAddress: return "NoServerAtAddress";
    case ErrorCode::kNoLabeledServerOnRootPath: return "NoLabeledServerOnRootPath";
    case ErrorCode::kCorruptAdvice: return "CorruptAdvice";
    case ErrorCode::kMalformedSpanner: return "MalformedSpanner";
    case ErrorCode::kPathTooShort: return "PathTooShort";
    case ErrorCode::kTauOutOfRange: return "TauOutOfRange";
    case ErrorCode::kBadPermutation: return "BadPermutation";
    case ErrorCode::kInvalidSequence: return "InvalidSequence";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ksl
