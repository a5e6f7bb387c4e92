#include "rabi/model.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

std::string show(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ModelParams::ModelParams(double kappa, double delta, double omega)
    : kappa_(kappa), delta_(delta), omega_(omega) {
  require(std::isfinite(kappa) && kappa > 0.0,
          "kappa must be a finite positive number (got " + show(kappa) + ")");
  require(std::isfinite(delta) && delta >= 0.0,
          "delta must be finite and non-negative (got " + show(delta) + ")");
  require(std::isfinite(omega) && omega > 0.0,
          "omega must be a finite positive number (got " + show(omega) + ")");
}

std::string_view to_string(Parity p) noexcept { return p == Parity::Plus ? "plus" : "minus"; }

std::optional<Parity> parse_parity(std::string_view text) noexcept {
  if (text == "plus" || text == "+") return Parity::Plus;
  if (text == "minus" || text == "-") return Parity::Minus;
  return std::nullopt;
}

std::string_view to_string(EnergyRep rep) noexcept {
  switch (rep) {
    case EnergyRep::Epsilon: return "epsilon";
    case EnergyRep::X: return "x";
    case EnergyRep::Zeta: return "zeta";
    case EnergyRep::E: return "E";
  }
  return "?";
}

EnergyValue EnergyValue::from(double value, EnergyRep rep, const ModelParams& p) {
  switch (rep) {
    case EnergyRep::Epsilon: return {value};
    case EnergyRep::X: return {value * p.kappa()};
    case EnergyRep::Zeta: return {value - p.kappa() * p.kappa()};
    case EnergyRep::E: return {value / p.omega()};
  }
  return {value};
}

double EnergyValue::as(EnergyRep rep, const ModelParams& p) const noexcept {
  switch (rep) {
    case EnergyRep::Epsilon: return epsilon;
    case EnergyRep::X: return x(p);
    case EnergyRep::Zeta: return zeta(p);
    case EnergyRep::E: return energy(p);
  }
  return epsilon;
}

double energy_convert(double value, EnergyRep from, EnergyRep to, const ModelParams& params) {
  if (from == to) return value;
  return EnergyValue::from(value, from, params).as(to, params);
}

double c_bar(const ModelParams& params, Parity parity, long n) noexcept {
  const double alternating = (n % 2 == 0) ? 1.0 : -1.0;
  return (static_cast<double>(n) + sign_of(parity) * alternating * params.delta()) / params.kappa();
}

RawCoeffs rabi_raw_coeffs(const ModelParams& params, Parity parity, double x, index_t n) noexcept {
  const double np1 = static_cast<double>(n) + 1.0;
  return {-(x - c_bar(params, parity, static_cast<long>(n))) / np1, 1.0 / np1};
}

RawCoeffs dho_raw_coeffs(double kappa, double x, index_t n) {
  require(kappa > 0.0, "kappa must be positive");
  const double nd = static_cast<double>(n);
  return {(nd - kappa * x) / ((nd + 1.0) * kappa), 1.0 / (nd + 1.0)};
}

void check_off_integer_pole(double zeta) {
  const double nearest = std::round(zeta);
  if (nearest >= 0.0 && std::fabs(zeta - nearest) < kPoleTolerance) {
    fail(ErrorKind::PoleAtInteger,
         "zeta = " + std::to_string(zeta) + " sits on the pole at " + std::to_string(nearest));
  }
}

double schweber_coeffs(const ModelParams& params, double zeta, index_t n) {
  check_off_integer_pole(zeta);
  const double k = params.kappa();
  const double d = static_cast<double>(n) - zeta;
  return 2.0 * k + (d - params.delta() * params.delta() / d) / (2.0 * k);
}

RawCoeffs schweber_raw_coeffs(const ModelParams& params, double zeta, index_t n) {
  const double np1 = static_cast<double>(n) + 1.0;
  return {-schweber_coeffs(params, zeta, n) / np1, 1.0 / np1};
}

namespace {

index_t settle_after(double turning_point) {
  if (!(turning_point > 0.0)) return 1;
  return static_cast<index_t>(std::ceil(turning_point)) + 1;
}

}  // namespace

RawRecurrence rabi_recurrence(const ModelParams& params, Parity parity, double x) {
  // a_n changes sign where cbar_n crosses x, i.e. near n = kappa x -+ delta.
  const double turning = params.kappa() * x + params.delta();
  return RawRecurrence(
      [params, parity, x](index_t n) { return rabi_raw_coeffs(params, parity, x, n); },
      settle_after(turning));
}

RawRecurrence dho_recurrence(double kappa, double x) {
  require(kappa > 0.0, "kappa must be positive");
  return RawRecurrence([kappa, x](index_t n) { return dho_raw_coeffs(kappa, x, n); },
                       settle_after(kappa * x));
}

RawRecurrence schweber_recurrence(const ModelParams& params, double zeta) {
  check_off_integer_pole(zeta);
  const double k = params.kappa();
  const double d2 = params.delta() * params.delta();
  return RawRecurrence(
      [k, d2, zeta](index_t n) {
        const double np1 = static_cast<double>(n) + 1.0;
        const double d = static_cast<double>(n) - zeta;
        const double f = 2.0 * k + (d - d2 / d) / (2.0 * k);
        return RawCoeffs{-f / np1, 1.0 / np1};
      },
      settle_after(zeta));
}

MonicRecurrence::MonicRecurrence(int alpha, double kappa, double delta, int sign)
    : alpha_(alpha), kappa_(kappa), delta_(delta), sign_(sign) {}

MonicRecurrence::MonicRecurrence(int alpha, Generator generator)
    : alpha_(alpha), generator_(std::move(generator)) {
  require(static_cast<bool>(generator_), "monic recurrence needs a coefficient generator");
}

MonicRecurrence MonicRecurrence::rabi(const ModelParams& params, Parity parity, int alpha) {
  require(alpha >= -1 && alpha <= 1,
          "monic family index alpha must be -1, 0 or +1 (got " + std::to_string(alpha) + ")");
  return MonicRecurrence(alpha, params.kappa(), params.delta(), sign_of(parity));
}

MonicRecurrence MonicRecurrence::dho(double kappa, int alpha) {
  return rabi(ModelParams(kappa, 0.0), Parity::Plus, alpha);
}

MonicRecurrence rabi_monic_family(const ModelParams& params, Parity parity, int alpha) {
  return MonicRecurrence::rabi(params, parity, alpha);
}

std::optional<index_t> growth_condition_onset(const ModelParams& params, Parity parity,
                                              index_t n_limit) {
  auto holds = [&](index_t n) {
    const double cn = c_bar(params, parity, static_cast<long>(n));
    const double cn1 = c_bar(params, parity, static_cast<long>(n) + 1);
    if (!(cn > 0.0 && cn1 > 0.0)) return false;
    const double ratio = static_cast<double>(n + 1) / (cn * cn1);
    return ratio >= 0.0 && ratio < 0.25;
  };
  if (!holds(n_limit)) return std::nullopt;
  index_t n = n_limit;
  while (n > 1 && holds(n - 1)) --n;
  return n;
}

}  // namespace rabi
