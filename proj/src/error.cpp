#include "ymlab/error.hpp"

namespace ymlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InvalidDegree: return "invalid-degree";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::InconsistentState: return "inconsistent-state";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::HorizonTooLong: return "horizon-too-long";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what,
             std::optional<std::size_t> node)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      node_(node) {}

}  // namespace ymlab
