#pragma once

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <random>

#include "rabi/model.hpp"

namespace rabi::test {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

inline double ulp(double v) {
  const double m = std::fabs(v);
  return std::nextafter(m, 2.0 * m + 1.0) - m;
}

// a < b as seen through computed zeros: computed values that are accurate to
// a couple of ulp may tie or swap by that much.
inline bool ordered(double a, double b, double ulps = 4.0) {
  return a <= b + ulps * ulp(std::max(std::fabs(a), std::fabs(b)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  Parity parity() { return index(0, 1) == 0 ? Parity::Plus : Parity::Minus; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rabi::test
