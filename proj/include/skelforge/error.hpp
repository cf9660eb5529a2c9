#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skelforge {

enum class ErrorCode {
  InvalidArgument,
  DegenerateStroke,
  SelfIntersecting,
  DegenerateAngle,
  NumericalCollapse,
  EmptySkeleton,
  DegenerateSlice,
  IterationLimit,
  SliceMiss,
  UnknownPart,
  SchemaVersionMismatch,
  MalformedDocument,
  OracleResolution,
};

std::string_view to_string(ErrorCode code);

// All engine failures surface as this exception; `code()` is what crosses the
// wire and the CLI diagnostic stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skelforge
