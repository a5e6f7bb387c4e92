#pragma once

#include <iosfwd>

#include "rabi_cli/serialize.hpp"

namespace rabi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Parses argv into a validated configuration. Throws rabi::Error(InvalidArgument)
/// on usage errors; returns nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Computes the result for a validated configuration; the configuration is
/// updated with the ranges actually used.
Document execute(RunConfig cfg);

/// Full entry point: parse, execute, write. Diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rabi::cli
