#include "rabi/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kWeightAgreement = 1e-8;

double perturbed_pivot(const MonicCoeffs& co) {
  return kEps * (std::fabs(co.c) + std::fabs(co.lambda) + 1.0);
}

// Shared scale for P_{k-1}, P_k, P'_{k-1}, P'_k.
struct ScaledQuad {
  double p_prev = 0.0, p_curr = 1.0, d_prev = 0.0, d_curr = 0.0;
  std::int64_t exponent = 0;

  void rescale() {
    const double big = std::max({std::fabs(p_prev), std::fabs(p_curr), std::fabs(d_prev),
                                 std::fabs(d_curr)});
    if (big == 0.0 || !std::isfinite(big)) return;
    const int magnitude = std::ilogb(big);
    if (magnitude > 400 || magnitude < -400) {
      p_prev = std::ldexp(p_prev, -magnitude);
      p_curr = std::ldexp(p_curr, -magnitude);
      d_prev = std::ldexp(d_prev, -magnitude);
      d_curr = std::ldexp(d_curr, -magnitude);
      exponent += magnitude;
    }
  }
};

}  // namespace

MonicPair eval_monic(const MonicRecurrence& rec, double x, index_t n) {
  ScaledPair pair;  // (P_{-1}, P_0) = (0, 1)
  for (index_t k = 1; k <= n; ++k) {
    const MonicCoeffs co = rec(k);
    const double next = (x - co.c) * pair.curr - co.lambda * pair.prev;
    pair.prev = pair.curr;
    pair.curr = next;
    pair.rescale();
  }
  return {pair.curr_value(), pair.prev_value()};
}

MonicDerivative eval_monic_derivative(const MonicRecurrence& rec, double x, index_t n) {
  ScaledQuad s;
  for (index_t k = 1; k <= n; ++k) {
    const MonicCoeffs co = rec(k);
    const double p_next = (x - co.c) * s.p_curr - co.lambda * s.p_prev;
    const double d_next = s.p_curr + (x - co.c) * s.d_curr - co.lambda * s.d_prev;
    s.p_prev = s.p_curr;
    s.p_curr = p_next;
    s.d_prev = s.d_curr;
    s.d_curr = d_next;
    s.rescale();
  }
  return {ScaledValue(s.p_curr, s.exponent), ScaledValue(s.p_prev, s.exponent),
          ScaledValue(s.d_curr, s.exponent)};
}

index_t sturm_count(const MonicRecurrence& rec, double x, index_t n) {
  index_t count = 0;
  double d = 1.0;
  for (index_t k = 1; k <= n; ++k) {
    const MonicCoeffs co = rec(k);
    d = (k == 1) ? (co.c - x) : (co.c - x) - co.lambda / d;
    if (d == 0.0) d = perturbed_pivot(co);
    if (d < 0.0) ++count;
  }
  return count;
}

SpectralBounds gershgorin_bounds(const MonicRecurrence& rec, index_t n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double left = 0.0;  // sqrt(lambda_k), coupling to row k-1
  MonicCoeffs co = rec(1);
  for (index_t k = 1; k <= n; ++k) {
    const MonicCoeffs next = rec(k + 1);
    const double right = (k < n) ? std::sqrt(next.lambda) : 0.0;
    lo = std::min(lo, co.c - left - right);
    hi = std::max(hi, co.c + left + right);
    left = right;
    co = next;
  }
  const double pad = 4.0 * kEps * std::max(std::fabs(lo), std::fabs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

std::vector<double> poly_zeros(const MonicRecurrence& rec, index_t n, index_t k_lo, index_t k_hi,
                               double tol) {
  require(tol > 0.0 && std::isfinite(tol), "zero tolerance must be positive");
  require(n >= 1 && k_lo >= 1 && k_lo <= k_hi && k_hi <= n,
          "zero indices must satisfy 1 <= k_lo <= k_hi <= n");
  const SpectralBounds bounds = gershgorin_bounds(rec, n);
  const index_t m = k_hi - k_lo + 1;
  // lower[i] < x_{n,k_lo+i} <= upper[i]; both arrays stay nondecreasing.
  std::vector<double> lower(m, bounds.lo);
  std::vector<double> upper(m, bounds.hi);

  std::vector<double> zeros(m);
  for (index_t i = 0; i < m; ++i) {
    const index_t k = k_lo + i;
    if (i > 0) lower[i] = std::max(lower[i], lower[i - 1]);
    double lo = lower[i];
    double hi = upper[i];
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const index_t count = sturm_count(rec, mid, n);
      if (count >= k) {
        hi = mid;
      } else {
        lo = mid;
      }
      // Share the count with the later brackets; indices below split have k <= count.
      const index_t split = std::min(m, count >= k_lo ? count - k_lo + 1 : index_t{0});
      for (index_t j = std::max(i + 1, split); j < m && mid > lower[j]; ++j) lower[j] = mid;
      for (index_t j = split; j > i + 1 && mid < upper[j - 1]; --j) upper[j - 1] = mid;
    }

    // refine on the sign of P_n while the bracket still shows a sign change
    int s_lo = eval_monic(rec, lo, n).p_n.sign();
    int s_hi = eval_monic(rec, hi, n).p_n.sign();
    if (s_lo != 0 && s_hi != 0 && s_lo != s_hi) {
      for (int iter = 0; iter < 64; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int s_mid = eval_monic(rec, mid, n).p_n.sign();
        if (s_mid == 0) {
          lo = hi = mid;
          break;
        }
        if (s_mid == s_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    }
    double root = 0.5 * (lo + hi);
    if (i > 0 && root <= zeros[i - 1]) root = std::nextafter(zeros[i - 1], bounds.hi);
    zeros[i] = root;
  }
  return zeros;
}

std::vector<double> poly_zeros(const MonicRecurrence& rec, index_t n, double tol) {
  return poly_zeros(rec, n, 1, n, tol);
}

namespace {

// Jacobi eigenvector at an (approximate) eigenvalue x via a twisted
// factorization: v_r = 1 at the twist index, v elsewhere from the stable
// one-sided ratios. Returns v_1, v_n and sum v_i^2.
struct TwistedVector {
  ScaledValue first;
  ScaledValue last;
  ScaledValue norm2;
};

TwistedVector twisted_eigenvector(const MonicRecurrence& rec, index_t n, double x) {
  std::vector<double> diag(n + 1), lam(n + 2);
  for (index_t k = 1; k <= n + 1; ++k) {
    const MonicCoeffs co = rec(k);
    if (k <= n) diag[k] = co.c - x;
    lam[k] = co.lambda;
  }
  auto guard = [&](double d, index_t k) {
    return d == 0.0 ? kEps * (std::fabs(diag[k] + x) + std::fabs(lam[k]) + 1.0) : d;
  };
  std::vector<double> fwd(n + 1), bwd(n + 2);
  fwd[1] = guard(diag[1], 1);
  for (index_t k = 2; k <= n; ++k) fwd[k] = guard(diag[k] - lam[k] / fwd[k - 1], k);
  bwd[n] = guard(diag[n], n);
  for (index_t k = n - 1; k >= 1; --k) bwd[k] = guard(diag[k] - lam[k + 1] / bwd[k + 1], k);

  index_t twist = 1;
  double best = std::numeric_limits<double>::infinity();
  for (index_t k = 1; k <= n; ++k) {
    const double gamma = fwd[k] + bwd[k] - diag[k];
    if (std::fabs(gamma) < best || !std::isfinite(best)) {
      best = std::fabs(gamma);
      twist = k;
    }
  }

  TwistedVector out;
  ScaledValue v(1.0);
  ScaledValue sum(1.0);
  ScaledValue first = v, last = v;
  // upward from the twist: v_k = -(sqrt(lambda_k) / bwd_k) v_{k-1}
  for (index_t k = twist + 1; k <= n; ++k) {
    v *= ScaledValue(-std::sqrt(lam[k]) / bwd[k]);
    sum += v * v;
    last = v;
  }
  v = ScaledValue(1.0);
  // downward: v_k = -(sqrt(lambda_{k+1}) / fwd_k) v_{k+1}
  for (index_t k = twist; k-- > 1;) {
    v *= ScaledValue(-std::sqrt(lam[k + 1]) / fwd[k]);
    sum += v * v;
    first = v;
  }
  out.first = first;
  out.last = (twist == n) ? ScaledValue(1.0) : last;
  if (twist == 1) out.first = ScaledValue(1.0);
  out.norm2 = sum;
  return out;
}

}  // namespace

WeightForms weight_forms(const MonicRecurrence& rec, index_t n, double node) {
  require(n >= 1, "quadrature order must be at least 1");
  const TwistedVector tv = twisted_eigenvector(rec, n, node);
  const ScaledValue sum_form = tv.first * tv.first / tv.norm2;

  // q_{n-1} = v_n / v_1 = P_{n-1} / sqrt(lambda_2..lambda_n), and at a zero of P_n
  // P_{n+1} = -lambda_{n+1} P_{n-1}.
  ScaledValue sqrt_prod(1.0);
  for (index_t k = 2; k <= n; ++k) sqrt_prod *= ScaledValue(std::sqrt(rec(k).lambda));
  const ScaledValue p_nm1 = tv.last / tv.first * sqrt_prod;
  const ScaledValue p_np1 = -(ScaledValue(rec(n + 1).lambda) * p_nm1);
  const ScaledValue dp_n = eval_monic_derivative(rec, node, n).dp_n;
  const ScaledValue numer = sqrt_prod * sqrt_prod * ScaledValue(rec(n + 1).lambda);
  return {sum_form, -(numer / (p_np1 * dp_n))};
}

QuadratureRule quadrature_weights(const MonicRecurrence& rec, const std::vector<double>& nodes) {
  const index_t n = nodes.size();
  require(n >= 1, "quadrature needs at least one node");
  QuadratureRule rule;
  rule.order = n;
  rule.nodes = nodes;
  rule.weights.resize(n);
  rule.scaled_weights.resize(n);
  for (index_t k = 0; k < n; ++k) {
    const WeightForms w = weight_forms(rec, n, nodes[k]);
    const double rel = ((w.sum_form - w.christoffel_darboux_form) / w.sum_form).to_double();
    if (!(std::fabs(rel) <= kWeightAgreement)) {
      fail(ErrorKind::InconsistentWeights,
           "weight forms disagree at node " + std::to_string(k + 1) + " of order " +
               std::to_string(n) + ": relative difference " + std::to_string(rel));
    }
    rule.scaled_weights[k] = w.sum_form;
    rule.weights[k] = w.sum_form.to_double();
  }
  return rule;
}

QuadratureRule gauss_rule(const MonicRecurrence& rec, index_t n, double tol) {
  return quadrature_weights(rec, poly_zeros(rec, n, tol));
}

double convergent(const MonicRecurrence& rec0, const MonicRecurrence& rec1, double a0, double x,
                  index_t n) {
  require(n >= 1, "convergent order must be at least 1");
  if (sturm_count(rec0, x - kPoleTolerance, n) != sturm_count(rec0, x + kPoleTolerance, n)) {
    fail(ErrorKind::NearPole, "x = " + std::to_string(x) + " lies within " +
                                  std::to_string(kPoleTolerance) + " of a zero of P_" +
                                  std::to_string(n));
  }
  const ScaledValue denom = eval_monic(rec0, x, n).p_n;
  const ScaledValue numer = eval_monic(rec1, x, n - 1).p_n;
  return a0 + (numer / denom).to_double();
}

double pfd_eval(const QuadratureRule& quad, double a0, double x) {
  double sum = a0;
  for (index_t k = 0; k < quad.nodes.size(); ++k) {
    const double gap = x - quad.nodes[k];
    if (std::fabs(gap) < kPoleTolerance) {
      fail(ErrorKind::NearPole, "x = " + std::to_string(x) + " lies within " +
                                    std::to_string(kPoleTolerance) + " of node " +
                                    std::to_string(k + 1));
    }
    sum += quad.weights[k] / gap;
  }
  return sum;
}

std::vector<double> moments(const MonicRecurrence& rec, index_t n) {
  require(n >= 1, "moment order must be at least 1");
  const QuadratureRule rule = gauss_rule(rec, n);
  std::vector<double> mu(2 * n, 0.0);
  for (index_t k = 0; k < n; ++k) {
    double power = rule.weights[k];
    for (index_t l = 0; l < 2 * n; ++l) {
      mu[l] += power;
      power *= rule.nodes[k];
    }
  }
  return mu;
}

}  // namespace rabi
