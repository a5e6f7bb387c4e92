#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rabi/analysis.hpp"
#include "rabi/spectrum.hpp"
#include "rabi_cli/config.hpp"

namespace rabi::cli {

struct DhoRow {
  index_t l = 0;
  double epsilon = 0.0;  // closed form l - kappa^2
  double solved = 0.0;   // parity solver at delta = 0
  double abs_error = 0.0;
};

struct DhoTable {
  double kappa = 0.0;
  double omega = 1.0;
  std::vector<DhoRow> rows;
};

struct StatsEntry {
  Parity parity = Parity::Plus;
  SpacingStats stats;
};

struct CapacityEntry {
  Parity parity = Parity::Plus;
  CapacityReport report;
};

/// One level of the merged parity spectrum against the nearest Schweber and
/// Braak roots (same parity for Braak); empty when none lies within 1e-3.
struct CompareRow {
  index_t k = 0;
  Parity parity = Parity::Plus;
  double zeta_parity = 0.0;
  std::optional<double> zeta_schweber;
  std::optional<double> zeta_braak;
};

struct CompareTable {
  std::vector<CompareRow> rows;
};

using Result = std::variant<Spectrum, ScanSeries, DhoTable, std::vector<StatsEntry>,
                            std::vector<CapacityEntry>, CompareTable>;

struct Document {
  RunConfig config;
  Result result;
};

/// 17 significant digits, '.' decimal point; "NA" for NaN.
std::string format_number(double v);
/// Inverse of format_number. Throws InvalidArgument on malformed text.
double parse_number(std::string_view text);

std::string serialize(const Document& doc);
/// The result type is taken from the embedded subcommand.
Document parse(std::string_view text, Format format);

}  // namespace rabi::cli
