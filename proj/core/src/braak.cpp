#include "rabi/braak.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr int kStopRun = 8;

}  // namespace

BraakG braak_G(const ModelParams& params, double zeta, double tol, index_t n_max) {
  check_off_integer_pole(zeta);
  require(tol > 0.0, "tolerance must be positive");
  const double kappa = params.kappa();
  const double delta = params.delta();
  const index_t min_terms =
      std::max<index_t>(16, (zeta > 0.0 ? static_cast<index_t>(std::ceil(zeta)) : 0) + 8);

  BraakSeriesState s;
  s.T.prev = 0.0;
  s.T.curr = 1.0;
  auto add_term = [&](index_t n) {
    const ScaledValue t = s.T.curr_value();
    const double shift = delta / (zeta - static_cast<double>(n));
    s.g_plus += t * ScaledValue(1.0 - shift);
    s.g_minus += t * ScaledValue(1.0 + shift);
    return t;
  };
  add_term(0);

  int small_run = 0;
  for (s.n = 0; s.n + 1 < n_max;) {
    const double f = schweber_coeffs(params, zeta, s.n);
    const double next = (kappa * f * s.T.curr - kappa * kappa * s.T.prev) /
                        static_cast<double>(s.n + 1);
    s.T.prev = s.T.curr;
    s.T.curr = next;
    s.T.rescale();
    ++s.n;
    const ScaledValue t = add_term(s.n);
    if (s.n < min_terms) continue;
    const double scale =
        std::max({1.0, std::fabs(s.g_plus.to_double()), std::fabs(s.g_minus.to_double())});
    if (abs_less(t, ScaledValue(tol * scale))) {
      if (++small_run >= kStopRun) return {s.g_plus.to_double(), s.g_minus.to_double(), s.n};
    } else {
      small_run = 0;
    }
  }
  fail(ErrorKind::NoConvergence,
       "G series did not converge within n_max = " + std::to_string(n_max) + " at zeta = " +
           std::to_string(zeta));
}

std::vector<ScaledValue> braak_K(const ModelParams& params, double zeta, index_t n) {
  check_off_integer_pole(zeta);
  std::vector<ScaledValue> K{ScaledValue(1.0)};
  ScaledValue prev;
  for (index_t m = 0; m < n; ++m) {
    const ScaledValue f(schweber_coeffs(params, zeta, m));
    const ScaledValue next = (f * K[m] - prev) / ScaledValue(static_cast<double>(m + 1));
    prev = K[m];
    K.push_back(next);
  }
  return K;
}

Spectrum braak_spectrum(const ModelParams& params, double zeta_lo, double zeta_hi,
                        index_t samples_per_unit, double tol) {
  require(samples_per_unit >= 64, "Braak scan needs at least 64 samples per unit");
  Spectrum spec;
  spec.params = params;
  spec.source = SpectrumSource::Braak;
  spec.tol = tol;
  if (!(zeta_hi > zeta_lo)) return spec;

  for (const Parity p : {Parity::Plus, Parity::Minus}) {
    const Evaluator G = [&](double z) {
      const BraakG g = braak_G(params, z);
      return p == Parity::Plus ? g.g_plus : g.g_minus;
    };
    index_t k = 0;
    for (const ScanRoot& r : scan_sign_changes(G, zeta_lo, zeta_hi, samples_per_unit, tol)) {
      EnergyLevel level;
      level.k = k++;
      level.parity = p;
      level.value = EnergyValue::from(r.value, EnergyRep::Zeta, params);
      level.bracket_lo = r.lo;
      level.bracket_hi = r.hi;
      level.residual = r.residual;
      level.stable = true;
      spec.levels.push_back(level);
    }
  }
  std::stable_sort(spec.levels.begin(), spec.levels.end(),
                   [](const EnergyLevel& a, const EnergyLevel& b) {
                     return a.value.epsilon < b.value.epsilon;
                   });
  return spec;
}

}  // namespace rabi
