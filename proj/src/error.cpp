#include "phasesep/error.hpp"

namespace phasesep {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidDisplacement: return "invalid-displacement";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::UndefinedEntropy: return "undefined-entropy";
    case ErrorKind::InvalidSplit: return "invalid-split";
    case ErrorKind::UnsupportedMap: return "unsupported-map";
    case ErrorKind::ResourceGuard: return "resource-guard";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace phasesep
