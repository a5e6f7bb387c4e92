#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rabi {

enum class ErrorKind {
  InvalidArgument,
  PoleAtInteger,
  NearPole,
  NoConvergence,
  NoRootInBracket,
  InconsistentWeights,
  MethodUnstable,
  TooFewLevels,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Validation errors are InvalidArgument; every other kind is a numerical failure.
constexpr bool is_numerical(ErrorKind kind) noexcept {
  return kind != ErrorKind::InvalidArgument;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace rabi
