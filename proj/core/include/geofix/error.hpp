#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geofix {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kDocumentMalformed,
  kNoFootprints,
  kBackendUnavailable,
  kMatchFailed,
  kInsufficientClassPixels,
  kPointAtInfinity,
  kDegenerateConfiguration,
  kInsufficientMatches,
  kNoConsensus,
  kDegenerateQuad,
  kWaypointOutsideBasemap,
  kConfigInvalid,
  kNoOkFrames,
  kMismatchedSequences,
};

std::string_view ToString(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ToString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDocumentMalformed: return "DocumentMalformed";
    case ErrorCode::kNoFootprints: return "NoFootprints";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kMatchFailed: return "MatchFailed";
    case ErrorCode::kInsufficientClassPixels: return "InsufficientClassPixels";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kInsufficientMatches: return "InsufficientMatches";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kDegenerateQuad: return "DegenerateQuad";
    case ErrorCode::kWaypointOutsideBasemap: return "WaypointOutsideBasemap";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kNoOkFrames: return "NoOkFrames";
    case ErrorCode::kMismatchedSequences: return "MismatchedSequences";
  }
  return "Unknown";
}

}  // namespace geofix
