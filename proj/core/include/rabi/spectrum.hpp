#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/ops.hpp"
#include "rabi/scaled.hpp"

namespace rabi {

inline constexpr double kDegeneracyTol = 1e-9;
inline constexpr double kResidualTol = 1e-8;
inline constexpr double kStabilityTol = 1e-8;

// ---------------------------------------------------------------------------
// Quantization function

struct CfResult {
  double value = 0.0;
  index_t n_used = 0;
  /// True when the rho/u series lost too much to cancellation and the value
  /// came from the backward continued-fraction evaluation instead.
  bool backward = false;
};

struct CfOptions {
  double tol = 1e-12;
  index_t n_max = 200000;
  /// Permit the backward evaluation when the series is unreliable.
  bool allow_fallback = true;
};

/// F = a_0 + sum_k rho_1...rho_k with rho_1 = -b_1/a_1,
/// u_l = 1/(1 - u_{l-1} b_l/(a_l a_{l-1})), rho_l = u_l - 1.
/// The sum stops after 8 consecutive terms below tol * max(1, |sum|) past the
/// recurrence's settle index. Throws NoConvergence at n_max.
CfResult F_cf(const RawRecurrence& rec, const CfOptions& opts = {});

/// Backward evaluation a_0 + t_1 with t_l = -b_l/(a_l + t_{l+1}), t_{depth+1} = 0.
double F_backward(const RawRecurrence& rec, index_t depth);

/// Parity-resolved F(x).
double F_rabi(const ModelParams& params, Parity parity, double x, const CfOptions& opts = {});
/// Schweber's F(zeta) = -f_0(zeta) + r_0(zeta). Throws PoleAtInteger on a pole.
double F_schweber(const ModelParams& params, double zeta, const CfOptions& opts = {});

// ---------------------------------------------------------------------------
// Brackets and roots

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_is_pole = false;
  bool hi_is_pole = false;
};

/// Lower end for the leading bracket: -(kappa + delta/kappa + 2).
double default_x_floor(const ModelParams& params);

/// (x_floor, x_{N,1}) followed by (x_{N,k}, x_{N,k+1}) for k = 1..count.
std::vector<Bracket> pole_brackets(const MonicRecurrence& rec0, index_t N, index_t count,
                                   double x_floor, double tol = kNodeTolerance);

struct RootResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  /// |F(value)| / max(1, |secant slope over the final bracket|).
  double residual = 0.0;
  /// The root sits closer to a pole than double precision can separate.
  bool pole_adjacent = false;
  /// Every F sample taken during refinement was nonincreasing in x.
  bool monotone = true;
};

using Evaluator = std::function<double(double)>;

/// Bisection for the unique sign change of a decreasing branch. Pole ends are
/// shrunk by max(1e-9, 1e-3 * width) and, when the sign test still fails,
/// progressively closer to the pole. Throws NoRootInBracket without a sign change.
RootResult find_root(const Evaluator& F, const Bracket& bracket, double tol = 1e-13);

/// A sign change of F located on a uniform scan and refined by bisection.
struct ScanRoot {
  double value;
  double lo;
  double hi;
  double residual;
};

/// Scans [lo, hi] at samples_per_unit points per unit length, splitting at the
/// non-negative integers (kept 1e-7 away), and bisects every sign change.
/// Sign changes through a pole are discarded.
std::vector<ScanRoot> scan_sign_changes(const Evaluator& F, double lo, double hi,
                                        index_t samples_per_unit, double tol = 1e-13);

// ---------------------------------------------------------------------------
// Spectra

struct SolverOptions {
  index_t n_trunc = 2000;
  double tol = 1e-12;
  CfOptions cf{};
  /// Zero means std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Skip the second solve at 2N; every level is then reported unstable.
  bool check_stability = true;
  std::optional<double> x_floor;
  /// Levels whose refinement has not started by the deadline are dropped.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class SpectrumSource { Parity, Merged, Schweber, Braak };
std::string_view to_string(SpectrumSource s) noexcept;

struct EnergyLevel {
  index_t k = 0;
  std::optional<Parity> parity;
  EnergyValue value;
  /// Bracket in the solver's working variable (x for parity spectra, zeta otherwise).
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
  index_t n_trunc = 0;
  bool stable = false;
  /// |value(N) - value(2N)| in the working variable; NaN when not checked.
  double shift = 0.0;
  bool pole_adjacent = false;
  bool monotone = true;
};

struct Spectrum {
  ModelParams params{1.0, 0.0};
  SpectrumSource source = SpectrumSource::Parity;
  std::optional<Parity> parity;
  std::vector<EnergyLevel> levels;
  double tol = 0.0;
  index_t n_trunc = 0;
  index_t n_trunc_check = 0;
  /// Roots found below the first pole (open question on the leading bracket).
  index_t leading_roots = 0;
};

/// The first n_levels eigenvalues of one parity, bracketed between the zeros
/// of P_N (N = max(n_trunc, 4 n_levels)) and refined on F_rabi.
Spectrum solve_spectrum(const ModelParams& params, Parity parity, index_t n_levels,
                        const SolverOptions& opts = {});

/// Both parities merged by energy; each level keeps its parity and index.
Spectrum merge_spectra(const Spectrum& plus, const Spectrum& minus);

/// Zeros of Schweber's F(zeta) on [zeta_lo, zeta_hi]. F increases between
/// its poles, so every scan cell where it drops holds a pole, which is
/// located by bisection before the roots on either side are bracketed.
Spectrum solve_schweber_spectrum(const ModelParams& params, double zeta_lo, double zeta_hi,
                                 index_t samples_per_unit = 256, double tol = 1e-13);

// ---------------------------------------------------------------------------
// Wavefunction coefficients

enum class WaveMethod { Forward, Backward };

struct WavefunctionCoeffs {
  WaveMethod method = WaveMethod::Backward;
  std::vector<ScaledValue> phi;

  double operator[](index_t n) const { return phi[n].to_double(); }
  index_t size() const noexcept { return phi.size(); }
};

/// phi_0..phi_N normalised to phi_0 = 1. Forward uses phi_n = P^(-1)_n(x)/n!
/// and throws MethodUnstable once the dominant solution takes over before N;
/// backward runs the raw recurrence downward from N + max(64, N/2).
WavefunctionCoeffs wavefunction(const ModelParams& params, Parity parity, const EnergyValue& eigen,
                                index_t N, WaveMethod method = WaveMethod::Backward);

// ---------------------------------------------------------------------------
// Juddian points

struct KappaRange {
  double lo;
  double hi;
  index_t samples = 400;
};

/// Couplings at which both parities have a level on the baseline
/// epsilon = l - kappa^2. For delta = 0 every grid coupling qualifies.
std::vector<double> detect_baseline_crossings(const KappaRange& range, double delta, index_t l,
                                              double tol = 1e-12);

}  // namespace rabi
