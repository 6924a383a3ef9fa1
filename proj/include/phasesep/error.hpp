#pragma once

#include <stdexcept>
#include <string>

namespace phasesep {

enum class ErrorKind {
  InvalidDimension,
  InvalidParameter,
  InvalidDisplacement,
  DimensionMismatch,
  NonFinite,
  UndefinedEntropy,
  InvalidSplit,
  UnsupportedMap,
  ResourceGuard,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this exception type; `kind()`
/// lets callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace phasesep
