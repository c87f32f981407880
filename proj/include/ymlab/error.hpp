#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ymlab {

enum class ErrorCode {
  InvalidInput,
  InvalidDegree,
  Configuration,
  Divergence,
  InconsistentState,
  Numeric,
  HorizonTooLong,
  Io,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library. `node()` carries the time-node
/// index for divergence errors raised by the integrators.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> node = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> node() const noexcept { return node_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> node_;
};

}  // namespace ymlab
