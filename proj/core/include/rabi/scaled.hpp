#pragma once

#include <cstdint>

namespace rabi {

/// A real number stored as mantissa * 2^exponent with |mantissa| in [1, 2)
/// (or exactly zero). Used wherever recurrence values leave the range of a
/// double; multiplication and division by powers of two are exact.
class ScaledValue {
 public:
  constexpr ScaledValue() = default;
  explicit ScaledValue(double value);
  ScaledValue(double mantissa, std::int64_t exponent);

  double mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept { return mantissa_ == 0.0; }
  bool is_finite() const noexcept;
  int sign() const noexcept { return (mantissa_ > 0.0) - (mantissa_ < 0.0); }

  /// Converts back to a double; saturates to +-inf or flushes to zero.
  double to_double() const noexcept;
  /// log2 |value|; -inf for zero.
  double log2_abs() const noexcept;

  ScaledValue abs() const noexcept { return ScaledValue(mantissa_ < 0 ? -mantissa_ : mantissa_, exponent_); }
  ScaledValue operator-() const noexcept { return ScaledValue(-mantissa_, exponent_); }

  friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b);
  friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b);
  friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b);
  friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) { return a + (-b); }

  ScaledValue& operator*=(const ScaledValue& o) { return *this = *this * o; }
  ScaledValue& operator/=(const ScaledValue& o) { return *this = *this / o; }
  ScaledValue& operator+=(const ScaledValue& o) { return *this = *this + o; }

  /// Magnitude ordering (ignores sign).
  friend bool abs_less(const ScaledValue& a, const ScaledValue& b) noexcept;

 private:
  void normalize() noexcept;

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

/// Two consecutive members of a recurrence sharing one power-of-two scale.
/// Rescaling touches both members identically, so their ratio is exact.
struct ScaledPair {
  double prev = 0.0;
  double curr = 1.0;
  std::int64_t exponent = 0;

  /// Pulls both members back towards unit magnitude when either leaves
  /// [2^-400, 2^400].
  void rescale() noexcept;

  ScaledValue prev_value() const { return ScaledValue(prev, exponent); }
  ScaledValue curr_value() const { return ScaledValue(curr, exponent); }
};

}  // namespace rabi
