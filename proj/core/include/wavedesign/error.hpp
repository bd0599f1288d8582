#pragma once

#include <stdexcept>
#include <string>

namespace wavedesign {

/// Raised when a caller-supplied parameter violates a precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on filesystem failures; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}
}  // namespace detail

}  // namespace wavedesign
