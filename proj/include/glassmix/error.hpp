#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glassmix {

enum class ErrorKind {
  InvalidParams,
  CapacityExceeded,
  DimensionMismatch,
  IndexOutOfRange,
  DomainError,
  NotAdjacent,
  NotReversible,
  InvalidSet,
  NoValidSet,
  NotAdmissible,
  InvalidX,
  Overflow,
  NumericGate,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` selects the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace glassmix
