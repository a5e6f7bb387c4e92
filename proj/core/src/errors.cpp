#include "rabi/errors.hpp"

namespace rabi {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PoleAtInteger: return "PoleAtInteger";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoRootInBracket: return "NoRootInBracket";
    case ErrorKind::InconsistentWeights: return "InconsistentWeights";
    case ErrorKind::MethodUnstable: return "MethodUnstable";
    case ErrorKind::TooFewLevels: return "TooFewLevels";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace rabi
