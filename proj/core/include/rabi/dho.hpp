#pragma once

#include <vector>

#include "rabi/model.hpp"
#include "rabi/scaled.hpp"

namespace rabi {

struct DhoLevel {
  index_t l;
  double epsilon;
};

/// epsilon_l = l - kappa^2.
double dho_eigenvalue(index_t l, double kappa);

/// Charlier-form coefficient
///   phi_n = sum_j (-1)^{n-j} kappa^{n-2j} / ((n-j)! j!) prod_{k<j} (zeta - k),
/// zeta = epsilon + kappa^2, summed with running products in scaled form.
ScaledValue charlier_phi_scaled(index_t n, double kappa, double zeta);
double charlier_phi(index_t n, double kappa, double epsilon);
/// As charlier_phi with zeta given directly (exact on the baselines).
double charlier_phi_zeta(index_t n, double kappa, double zeta);

/// The j-th term of the sum at zeta = l, i.e. (-1)^{n-j} kappa^{n-2j} C(l, j) / (n-j)!.
ScaledValue charlier_term_on_baseline(index_t n, index_t j, index_t l, double kappa);

struct CollapseReport {
  index_t l = 0;
  double kappa = 0.0;
  /// |phi_n| at zeta = l for n = 0..n_max.
  std::vector<double> phi_abs;
  /// kappa^{n-2l} / (n-l)!, the j = l term that dominates for n >> l.
  std::vector<double> leading;
  /// l kappa^{n+2-2l} / (n+1-l)!, which is the j = l-1 term.
  std::vector<double> next_to_leading;
  /// max | |phi_n| / leading_n - 1 | over n in [max(l, n_max/2), n_max].
  double max_rel_deviation = 0.0;
  /// phi_n n! / kappa^n at zeta = l + 1/2 for n = 0..n_max.
  std::vector<double> off_spectrum_normalized;
  /// |phi_n n!/kappa^n| off the spectrum divided by the same on the baseline, at n_max.
  double off_spectrum_ratio = 0.0;
};

CollapseReport dho_collapse_check(index_t l, double kappa, index_t n_max);

/// P_n(x) - P^(-1)_n(x - 1/kappa) for the displaced oscillator; nonzero in
/// general, so the shifted-family identity is reported rather than relied on.
double dho_shift_identity_defect(double kappa, double x, index_t n);

}  // namespace rabi
