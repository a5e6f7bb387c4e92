#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rabi/model.hpp"

namespace rabi::cli {

enum class Format { Json, Csv };
enum class ParitySelector { Plus, Minus, Both };

std::string_view to_string(Format f) noexcept;
std::string_view to_string(ParitySelector p) noexcept;

inline constexpr std::string_view kSubcommands[] = {"spectrum", "scan",  "dho",     "braak",
                                                    "compare",  "stats", "capacity"};

struct RunConfig {
  std::string subcommand;
  double kappa = 0.0;
  double delta = 0.0;
  double omega = 1.0;
  ParitySelector parity = ParitySelector::Both;
  index_t levels = 10;
  index_t trunc = 2000;
  double tol = 1e-12;
  std::optional<double> xmin, xmax, zmin, zmax;
  index_t samples = 2000;
  Format format = Format::Json;
  std::string out;  // empty writes to standard output
  unsigned workers = 0;
  /// capacity only
  index_t ceiling = 2000;
  double budget = 120.0;

  ModelParams params() const { return ModelParams(kappa, delta, omega); }
  std::vector<Parity> parities() const;
};

/// Key/value view of the effective configuration, in a fixed order. Unset
/// optional bounds have an empty value.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);
RunConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& entries);

/// Throws rabi::Error(InvalidArgument) on the first violated constraint.
void validate(const RunConfig& cfg);

}  // namespace rabi::cli
