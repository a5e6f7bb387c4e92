#include "rabi/dho.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "rabi/errors.hpp"
#include "rabi/ops.hpp"

namespace rabi {

double dho_eigenvalue(index_t l, double kappa) {
  require(kappa > 0.0, "kappa must be positive");
  return static_cast<double>(l) - kappa * kappa;
}

namespace {

// The alternating sum cancels heavily near zeros of phi_n in epsilon, so the
// terms and the sum are carried in long double with a separate power-of-two
// exponent for range.
ScaledValue charlier_sum(index_t n, long double kappa, long double zeta) {
  require(kappa > 0.0L, "kappa must be positive");
  constexpr int kStep = 8000;
  const long double k2 = kappa * kappa;
  long double term = (n % 2 == 0) ? 1.0L : -1.0L;
  long double sum = 0.0L;
  std::int64_t exponent = 0;
  auto rescale = [&] {
    const long double mag = std::fabs(term);
    if (mag > std::ldexp(1.0L, kStep)) {
      term = std::ldexp(term, -kStep);
      sum = std::ldexp(sum, -kStep);
      exponent += kStep;
    } else if (mag != 0.0L && mag < std::ldexp(1.0L, -kStep) && std::fabs(sum) < std::ldexp(1.0L, -kStep)) {
      term = std::ldexp(term, kStep);
      sum = std::ldexp(sum, kStep);
      exponent -= kStep;
    }
  };
  for (index_t i = 1; i <= n; ++i) {
    term *= kappa / static_cast<long double>(i);
    rescale();
  }
  sum = term;
  for (index_t j = 1; j <= n; ++j) {
    const long double factor = -static_cast<long double>(n - j + 1) *
                               (zeta - static_cast<long double>(j - 1)) /
                               (static_cast<long double>(j) * k2);
    if (factor == 0.0L) break;
    term *= factor;
    sum += term;
    rescale();
  }
  if (sum == 0.0L) return ScaledValue();
  int e = 0;
  const long double mantissa = std::frexp(sum, &e);
  return ScaledValue(static_cast<double>(2.0L * mantissa), exponent + e - 1);
}

}  // namespace

ScaledValue charlier_phi_scaled(index_t n, double kappa, double zeta) {
  return charlier_sum(n, kappa, zeta);
}

double charlier_phi(index_t n, double kappa, double epsilon) {
  const long double k = kappa;
  return charlier_sum(n, k, static_cast<long double>(epsilon) + k * k).to_double();
}

double charlier_phi_zeta(index_t n, double kappa, double zeta) {
  return charlier_sum(n, kappa, zeta).to_double();
}

ScaledValue charlier_term_on_baseline(index_t n, index_t j, index_t l, double kappa) {
  require(j <= n, "term index must not exceed n");
  if (j > l) return ScaledValue();
  // kappa^{n-2j} C(l, j) / (n-j)!
  ScaledValue v(((n - j) % 2 == 0) ? 1.0 : -1.0);
  const double inv_k = 1.0 / kappa;
  for (index_t i = 0; i < n; ++i) v *= ScaledValue(kappa);
  for (index_t i = 0; i < 2 * j; ++i) v *= ScaledValue(inv_k);
  for (index_t i = 1; i <= j; ++i) {
    v *= ScaledValue(static_cast<double>(l - j + i) / static_cast<double>(i));
  }
  for (index_t i = 2; i <= n - j; ++i) v /= ScaledValue(static_cast<double>(i));
  return v;
}

CollapseReport dho_collapse_check(index_t l, double kappa, index_t n_max) {
  require(kappa > 0.0, "kappa must be positive");
  require(n_max >= l, "n_max must be at least l");
  CollapseReport r;
  r.l = l;
  r.kappa = kappa;
  const double zeta = static_cast<double>(l);
  ScaledValue norm(1.0);  // n! / kappa^n
  ScaledValue on_norm, off_norm;
  for (index_t n = 0; n <= n_max; ++n) {
    if (n > 0) norm *= ScaledValue(static_cast<double>(n) / kappa);
    const ScaledValue on = charlier_phi_scaled(n, kappa, zeta);
    const ScaledValue off = charlier_phi_scaled(n, kappa, zeta + 0.5);
    r.phi_abs.push_back(on.abs().to_double());
    if (n >= l) {
      r.leading.push_back(charlier_term_on_baseline(n, l, l, kappa).abs().to_double());
      r.next_to_leading.push_back(
          l >= 1 ? charlier_term_on_baseline(n, l - 1, l, kappa).abs().to_double() : 0.0);
    } else {
      r.leading.push_back(0.0);
      r.next_to_leading.push_back(0.0);
    }
    on_norm = (on * norm).abs();
    off_norm = (off * norm).abs();
    r.off_spectrum_normalized.push_back((off * norm).to_double());
    if (n >= std::max(l, n_max / 2)) {
      const ScaledValue lead = charlier_term_on_baseline(n, l, l, kappa).abs();
      const double dev = std::fabs((on.abs() / lead).to_double() - 1.0);
      r.max_rel_deviation = std::max(r.max_rel_deviation, dev);
    }
  }
  r.off_spectrum_ratio = on_norm.is_zero() ? INFINITY : (off_norm / on_norm).to_double();
  return r;
}

double dho_shift_identity_defect(double kappa, double x, index_t n) {
  const MonicRecurrence p0 = MonicRecurrence::dho(kappa, 0);
  const MonicRecurrence pm = MonicRecurrence::dho(kappa, -1);
  const double a = eval_monic(p0, x, n).p_n.to_double();
  const double b = eval_monic(pm, x - 1.0 / kappa, n).p_n.to_double();
  return a - b;
}

}  // namespace rabi
