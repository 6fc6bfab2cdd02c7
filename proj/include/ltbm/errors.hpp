#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ltbm {

// Stable numbering; mirrored by ltbm_status in the C header.
enum class ErrorCode : int {
  Syntax = 1,
  UnknownSymbol,
  Domain,
  Signature,
  SingularMetric,
  InvalidDimensionParam,
  LeftChart,
  StepFailure,
  NoConvergence,
  AmbiguousGeodesic,
  ConjugatePoints,
  SingularM,
  EigenFailure,
  EmptyRegion,
  NonTimelikePair,
  GridTooCoarse,
  PreconditionFailed,
  InvariantFailure,
  ContainmentFailure,
  DualizabilityUnverified,
  TooManyAtoms,
  Config,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(ErrorCode::Syntax, message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ltbm
