#include "rabi/scaled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rabi {

namespace {

constexpr int kRescaleBits = 400;
constexpr std::int64_t kDoubleExponentLimit = 1100;

}  // namespace

ScaledValue::ScaledValue(double value) : mantissa_(value) { normalize(); }

ScaledValue::ScaledValue(double mantissa, std::int64_t exponent)
    : mantissa_(mantissa), exponent_(exponent) {
  normalize();
}

void ScaledValue::normalize() noexcept {
  if (mantissa_ == 0.0) {
    exponent_ = 0;
    return;
  }
  if (!std::isfinite(mantissa_)) return;
  int shift = 0;
  mantissa_ = std::frexp(mantissa_, &shift) * 2.0;
  exponent_ += shift - 1;
}

bool ScaledValue::is_finite() const noexcept { return std::isfinite(mantissa_); }

double ScaledValue::to_double() const noexcept {
  if (mantissa_ == 0.0 || !std::isfinite(mantissa_)) return mantissa_;
  if (exponent_ > kDoubleExponentLimit) {
    return mantissa_ > 0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  }
  if (exponent_ < -kDoubleExponentLimit) return mantissa_ > 0 ? 0.0 : -0.0;
  return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

double ScaledValue::log2_abs() const noexcept {
  if (mantissa_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(std::fabs(mantissa_)) + static_cast<double>(exponent_);
}

ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
  return ScaledValue(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
  return ScaledValue(a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
}

ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t gap = a.exponent_ - b.exponent_;
  // Both mantissas lie in [1, 2): beyond 60 bits the smaller operand cannot
  // affect the rounded sum.
  if (gap > 60) return a;
  if (gap < -60) return b;
  if (gap >= 0) {
    return ScaledValue(a.mantissa_ + std::ldexp(b.mantissa_, static_cast<int>(-gap)), a.exponent_);
  }
  return ScaledValue(std::ldexp(a.mantissa_, static_cast<int>(gap)) + b.mantissa_, b.exponent_);
}

bool abs_less(const ScaledValue& a, const ScaledValue& b) noexcept {
  if (a.is_zero()) return !b.is_zero();
  if (b.is_zero()) return false;
  if (a.exponent_ != b.exponent_) return a.exponent_ < b.exponent_;
  return std::fabs(a.mantissa_) < std::fabs(b.mantissa_);
}

void ScaledPair::rescale() noexcept {
  const double big = std::max(std::fabs(prev), std::fabs(curr));
  if (big == 0.0 || !std::isfinite(big)) return;
  const int magnitude = std::ilogb(big);
  if (magnitude > kRescaleBits || magnitude < -kRescaleBits) {
    prev = std::ldexp(prev, -magnitude);
    curr = std::ldexp(curr, -magnitude);
    exponent += magnitude;
  }
}

}  // namespace rabi
