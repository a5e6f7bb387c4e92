#pragma once

#include <vector>

#include "rabi/model.hpp"
#include "rabi/scaled.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {

/// Upward K_n recursion state: T_n = K_n kappa^n kept as a scaled pair, with
/// the G+- partial sums in scaled form.
struct BraakSeriesState {
  ScaledPair T;  // prev = T_{n-1}, curr = T_n
  index_t n = 0;
  ScaledValue g_plus;
  ScaledValue g_minus;
};

struct BraakG {
  double g_plus;
  double g_minus;
  index_t n_used;
};

/// G+-(zeta) = sum_n K_n kappa^n [1 -+ delta/(zeta - n)] with K_0 = 1,
/// K_1 = f_0 and (n+1) K_{n+1} = f_n K_n - K_{n-1}. Throws PoleAtInteger
/// on a pole and NoConvergence at n_max.
BraakG braak_G(const ModelParams& params, double zeta, double tol = 1e-15,
               index_t n_max = 100000);

/// K_0..K_n by the same upward recursion, without the kappa^n factor.
std::vector<ScaledValue> braak_K(const ModelParams& params, double zeta, index_t n);

/// Dense scan of G+ and G- over [zeta_lo, zeta_hi] with bisection on every
/// sign change. Zeros of G+ carry Parity::Plus, zeros of G- Parity::Minus;
/// the correspondence with the parity solver is checked numerically.
Spectrum braak_spectrum(const ModelParams& params, double zeta_lo, double zeta_hi,
                        index_t samples_per_unit = 256, double tol = 1e-13);

}  // namespace rabi
