#include "glassmix/error.hpp"

namespace glassmix {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "invalid parameters";
    case ErrorKind::CapacityExceeded: return "capacity exceeded";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::IndexOutOfRange: return "index out of range";
    case ErrorKind::DomainError: return "domain error";
    case ErrorKind::NotAdjacent: return "not adjacent";
    case ErrorKind::NotReversible: return "not reversible";
    case ErrorKind::InvalidSet: return "invalid set";
    case ErrorKind::NoValidSet: return "no valid set";
    case ErrorKind::NotAdmissible: return "not admissible";
    case ErrorKind::InvalidX: return "invalid x";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NumericGate: return "numeric gate";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace glassmix
