#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

enum class ScanVariable { X, Zeta };
std::string_view to_string(ScanVariable v) noexcept;

/// Which quantization function a scan samples: the parity-resolved F(x) or
/// Schweber's F(zeta).
struct ScanTarget {
  std::optional<Parity> parity;  // empty selects the Schweber form

  static ScanTarget of(Parity p) { return {p}; }
  static ScanTarget schweber() { return {std::nullopt}; }
};

struct ScanSeries {
  ScanVariable variable = ScanVariable::X;
  std::vector<double> t;
  /// NaN marks a sample masked next to a pole.
  std::vector<double> F;
  std::vector<double> poles;

  static bool masked(double f) { return f != f; }
};

/// F on a uniform grid of `samples` points over [lo, hi]. Samples within
/// kPoleTolerance of a pole are masked. Parity scans take their poles from
/// the zeros of P_N; Schweber scans annotate the integer poles and the
/// pole-type sign changes found on the grid.
ScanSeries scan_F(const ModelParams& params, const ScanTarget& target, double lo, double hi,
                  index_t samples, index_t n_trunc = 2000);

/// Sign changes between consecutive unmasked samples with no annotated pole between them.
index_t count_zero_crossings(const ScanSeries& series);

/// Samples of F across one pole gap on a grid clustered geometrically toward
/// both ends (from 4 ulp of the end up to half the gap), so that roots lying
/// within a few ulp of a pole are still bracketed.
struct BranchScan {
  std::vector<double> t;
  std::vector<double> F;
  bool strictly_decreasing = true;
  /// Sign changes in (F(lo+), samples..., F(hi-)), taking the limits at pole
  /// ends as +inf on the left and -inf on the right.
  index_t sign_changes = 0;
  /// Sign changes seen between two finite samples, without the limits.
  index_t resolved = 0;
};

BranchScan monotone_branch_scan(const Evaluator& F, const Bracket& gap, index_t points = 64);

inline constexpr index_t kHistogramBins = 30;
inline constexpr double kHistogramMax = 3.0;

struct SpacingStats {
  std::vector<double> spacings;  // normalised nearest-neighbour spacings
  std::array<index_t, kHistogramBins> histogram{};
  index_t overflow = 0;  // spacings >= kHistogramMax
  index_t count = 0;
  double mean_spacing = 0.0;  // raw mean, in epsilon
  double mean = 0.0;          // mean of the normalised spacings
  double min = 0.0;
  double max = 0.0;
};

/// Throws TooFewLevels below three levels and InvalidArgument when the
/// spectrum mixes parities.
SpacingStats spacing_stats(const Spectrum& spec);

/// Histogram, mean, min and max of already normalised spacings.
SpacingStats summarize_spacings(std::vector<double> spacings, double mean_spacing);

struct CapacityFailure {
  index_t k = 0;
  double x = 0.0;
  double residual = 0.0;
  double shift = 0.0;
  std::string reason;
};

struct CapacityReport {
  index_t levels_computed = 0;
  index_t n_ceiling = 0;
  index_t n_trunc = 0;
  double elapsed_seconds = 0.0;
  std::optional<CapacityFailure> first_failure;
};

struct CapacityOptions {
  double budget_seconds = 120.0;
  double residual_tol = kResidualTol;
  double stability_tol = kStabilityTol;
  unsigned workers = 0;
};

/// Counts levels, ascending, until the first one that fails the residual or
/// stability check (or, for delta = 0, the closed form), or the wall-clock
/// budget runs out.
CapacityReport capacity_probe(const ModelParams& params, Parity parity, index_t n_ceiling,
                              const CapacityOptions& opts = {});

}  // namespace rabi
