#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

namespace rabi {

using index_t = std::size_t;

/// Absolute distance below which zeta is treated as sitting on an integer pole.
inline constexpr double kPoleTolerance = 1e-9;

/// Dimensionless Rabi-model parameters: coupling kappa = g/omega,
/// level splitting delta = mu/omega, and the frequency scale omega.
class ModelParams {
 public:
  /// Throws InvalidArgument unless kappa > 0, delta >= 0 and omega > 0.
  ModelParams(double kappa, double delta, double omega = 1.0);

  double kappa() const noexcept { return kappa_; }
  double delta() const noexcept { return delta_; }
  double omega() const noexcept { return omega_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double kappa_;
  double delta_;
  double omega_;
};

enum class Parity { Plus, Minus };

constexpr int sign_of(Parity p) noexcept { return p == Parity::Plus ? 1 : -1; }
constexpr Parity opposite(Parity p) noexcept { return p == Parity::Plus ? Parity::Minus : Parity::Plus; }
std::string_view to_string(Parity p) noexcept;
std::optional<Parity> parse_parity(std::string_view text) noexcept;

enum class EnergyRep { Epsilon, X, Zeta, E };

std::string_view to_string(EnergyRep rep) noexcept;

/// An energy eigenvalue held as epsilon = E/omega; the other representations
/// x = epsilon/kappa, zeta = epsilon + kappa^2 and E = omega*epsilon are derived.
struct EnergyValue {
  double epsilon = 0.0;

  static EnergyValue from(double value, EnergyRep rep, const ModelParams& params);

  double x(const ModelParams& p) const noexcept { return epsilon / p.kappa(); }
  double zeta(const ModelParams& p) const noexcept { return epsilon + p.kappa() * p.kappa(); }
  double energy(const ModelParams& p) const noexcept { return p.omega() * epsilon; }
  double as(EnergyRep rep, const ModelParams& p) const noexcept;

  friend bool operator==(const EnergyValue&, const EnergyValue&) = default;
};

double energy_convert(double value, EnergyRep from, EnergyRep to, const ModelParams& params);

// ---------------------------------------------------------------------------
// Raw three-term recurrences  phi_{n+1} + a_n phi_n + b_n phi_{n-1} = 0.

struct RawCoeffs {
  double a;
  double b;
};

/// c-bar_n = [n +- (-1)^n delta] / kappa.
double c_bar(const ModelParams& params, Parity parity, long n) noexcept;

/// Parity-resolved Rabi coefficients: a_n = -(x - cbar_n)/(n+1), b_n = 1/(n+1).
RawCoeffs rabi_raw_coeffs(const ModelParams& params, Parity parity, double x, index_t n) noexcept;

/// Displaced oscillator: a_n = (n - kappa x)/((n+1) kappa), b_n = 1/(n+1).
RawCoeffs dho_raw_coeffs(double kappa, double x, index_t n);

/// Schweber's f_n(zeta) = 2 kappa + (n - zeta - delta^2/(n - zeta)) / (2 kappa).
/// Throws PoleAtInteger when zeta is within kPoleTolerance of a non-negative integer.
double schweber_coeffs(const ModelParams& params, double zeta, index_t n);

/// Schweber's recurrence normalised to the canonical sign: a_n = -f_n/(n+1).
RawCoeffs schweber_raw_coeffs(const ModelParams& params, double zeta, index_t n);

/// Throws PoleAtInteger if zeta lies within kPoleTolerance of some m >= 0.
void check_off_integer_pole(double zeta);

/// A raw coefficient stream evaluated at a fixed spectral value.
///
/// settle_index() is the index past which |a_n| grows monotonically; partial
/// sums of the continued fraction are not trusted to have converged before it.
class RawRecurrence {
 public:
  using Generator = std::function<RawCoeffs(index_t)>;

  RawRecurrence(Generator generator, index_t settle_index)
      : generator_(std::move(generator)), settle_index_(settle_index) {}

  RawCoeffs operator()(index_t n) const { return generator_(n); }
  index_t settle_index() const noexcept { return settle_index_; }

 private:
  Generator generator_;
  index_t settle_index_;
};

RawRecurrence rabi_recurrence(const ModelParams& params, Parity parity, double x);
RawRecurrence dho_recurrence(double kappa, double x);
/// Throws PoleAtInteger for zeta on an integer pole.
RawRecurrence schweber_recurrence(const ModelParams& params, double zeta);

// ---------------------------------------------------------------------------
// Monic orthogonal polynomial families
//   P_n = (x - c_n) P_{n-1} - lambda_n P_{n-2},  P_{-1} = 0, P_0 = 1.

struct MonicCoeffs {
  double c;
  double lambda;
};

class MonicRecurrence {
 public:
  using Generator = std::function<MonicCoeffs(index_t)>;

  /// The Rabi family P^(alpha): c_n = cbar_{n+alpha}, lambda_n = n + alpha,
  /// with lambda_1 = 1 for alpha = -1. Throws InvalidArgument for alpha
  /// outside {-1, 0, 1}.
  static MonicRecurrence rabi(const ModelParams& params, Parity parity, int alpha);
  /// Displaced-oscillator family (delta = 0).
  static MonicRecurrence dho(double kappa, int alpha);

  /// Arbitrary coefficient stream, e.g. for classical families in tests.
  MonicRecurrence(int alpha, Generator generator);

  int alpha() const noexcept { return alpha_; }

  MonicCoeffs operator()(index_t n) const noexcept {
    if (generator_) return generator_(n);
    const long shifted = static_cast<long>(n) + alpha_;
    const double parity_term = (shifted % 2 == 0 ? 1.0 : -1.0) * sign_ * delta_;
    const double c = (static_cast<double>(shifted) + parity_term) / kappa_;
    const double lambda = shifted == 0 ? 1.0 : static_cast<double>(shifted);
    return {c, lambda};
  }

 private:
  MonicRecurrence(int alpha, double kappa, double delta, int sign);

  int alpha_;
  double kappa_ = 1.0;
  double delta_ = 0.0;
  int sign_ = 1;
  Generator generator_;
};

MonicRecurrence rabi_monic_family(const ModelParams& params, Parity parity, int alpha);

/// Smallest N0 such that lambda-bar_{n+1} / (cbar_n cbar_{n+1}) lies in
/// [0, 1/4) and cbar_n > 0 for every n in [N0, n_limit]; nullopt if the
/// condition still fails at n_limit.
std::optional<index_t> growth_condition_onset(const ModelParams& params, Parity parity,
                                              index_t n_limit);

}  // namespace rabi
