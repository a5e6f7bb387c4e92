#pragma once

#include <limits>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/scaled.hpp"

namespace rabi {

/// Default bisection width for polynomial zeros. It is below double
/// resolution, so Sturm bisection runs until the bracket cannot shrink.
inline constexpr double kNodeTolerance = std::numeric_limits<double>::min();

struct MonicPair {
  ScaledValue p_n;
  ScaledValue p_nm1;
};

struct MonicDerivative {
  ScaledValue p_n;
  ScaledValue p_nm1;
  ScaledValue dp_n;
};

/// P_n(x) and P_{n-1}(x) by the monic recurrence with paired power-of-two
/// scaling. For n = 0 the pair is (1, 0).
MonicPair eval_monic(const MonicRecurrence& rec, double x, index_t n);

/// As eval_monic, plus P_n'(x) from the differentiated recurrence.
MonicDerivative eval_monic_derivative(const MonicRecurrence& rec, double x, index_t n);

/// Number of zeros of P_n strictly below x (negative LDL^T pivots of J_n - x).
index_t sturm_count(const MonicRecurrence& rec, double x, index_t n);

/// Interval [lo, hi] that contains every zero of P_n (Gershgorin discs of J_n).
struct SpectralBounds {
  double lo;
  double hi;
};
SpectralBounds gershgorin_bounds(const MonicRecurrence& rec, index_t n);

/// Zeros x_{n,k_lo} .. x_{n,k_hi} (1-based, ascending) by Sturm bisection to
/// width tol, then refined on the sign of P_n. The counts for P_n extend those
/// for P_{n-1} pivot by pivot, so at the default width the computed zeros of
/// consecutive orders interlace.
std::vector<double> poly_zeros(const MonicRecurrence& rec, index_t n, index_t k_lo, index_t k_hi,
                               double tol = kNodeTolerance);

/// All n zeros of P_n.
std::vector<double> poly_zeros(const MonicRecurrence& rec, index_t n, double tol = kNodeTolerance);

struct QuadratureRule {
  index_t order = 0;
  std::vector<double> nodes;
  /// Weights as doubles; those below the double range flush to zero.
  std::vector<double> weights;
  /// The same weights without range limits.
  std::vector<ScaledValue> scaled_weights;
};

/// Gauss weights for the full zero set of P_n, normalised so that they sum to one.
///
/// The sum form 1/sum_l q_l(x)^2 is evaluated on the Jacobi eigenvector built
/// by a twisted factorization; the Christoffel-Darboux form
/// -(lambda_2..lambda_{n+1}) / (P_{n+1} P_n') is evaluated independently from
/// the eigenvector's last component and the differentiated recurrence.
/// Throws InconsistentWeights if they differ by more than 1e-8 relative.
QuadratureRule quadrature_weights(const MonicRecurrence& rec, const std::vector<double>& nodes);

/// Both weight forms at one node, for diagnostics.
struct WeightForms {
  ScaledValue sum_form;
  ScaledValue christoffel_darboux_form;
};
WeightForms weight_forms(const MonicRecurrence& rec, index_t n, double node);

/// Zeros and weights of order n.
QuadratureRule gauss_rule(const MonicRecurrence& rec, index_t n, double tol = kNodeTolerance);

/// F_n(x) = a0 + P^(1)_{n-1}(x) / P_n(x). Throws NearPole when a zero of P_n
/// lies within kPoleTolerance of x.
double convergent(const MonicRecurrence& rec0, const MonicRecurrence& rec1, double a0, double x,
                  index_t n);

/// a0 + sum_k M_k / (x - x_k). Throws NearPole within kPoleTolerance of a node.
double pfd_eval(const QuadratureRule& quad, double a0, double x);

/// mu_0 .. mu_{2n-1} from the order-n Gauss rule.
std::vector<double> moments(const MonicRecurrence& rec, index_t n);

}  // namespace rabi
