#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lipgm {

enum class ErrorCode {
  NotPositiveDefinite,
  NonConvergence,
  DegenerateData,
  DimensionMismatch,
  StructureMismatch,
  EnumerationCapExceeded,
  UnnormalizableFeatureMap,
  FeatureBoundViolated,
  DeclaredBoundViolated,
  MissingLagValues,
  IndexOutOfRange,
  InvalidArgument,
  TooFewSamples,
  WindowTooLarge,
  SchemaVersionMismatch,
  MalformedField,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace lipgm
