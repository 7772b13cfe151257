#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nerkit {

enum class ErrorCode {
  kInvalidSequence,
  kMalformedLabel,
  kRaggedRow,
  kTokenizationMismatch,
  kEncodingInvalid,
  kMetadata,
  kDocumentCountMismatch,
  kUnknownDiffId,
  kWouldCreateInvalidTransition,
  kBadLocation,
  kSurfaceMismatch,
  kBadPage,
  kFormat,  // malformed patch/decision/disagreement file
  kIo,
  kInvariantBreach,
};

std::string_view error_code_name(ErrorCode code);

// All toolkit failures are reported through this one exception type; callers
// dispatch on code() when they need to.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nerkit
