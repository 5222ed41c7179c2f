#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pingloc {

enum class ErrorCode {
  kInvalidArgument,
  kConfig,
  kUndefinedBearing,
  kOutOfWindow,
  kIo,
  kBadMagic,
  kVersionMismatch,
  kTruncatedPayload,
  kDegenerateSignal,
  kNoPing,
  kWindowTooLong,
  kUnstableWindow,
  kSingularGeometry,
  kDiverged,
  kUnresolvableAxis,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pingloc
