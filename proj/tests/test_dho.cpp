#include <doctest.h>

#include <cmath>

#include "rabi/dho.hpp"
#include "rabi/ops.hpp"
#include "rabi/spectrum.hpp"
#include "support.hpp"

using namespace rabi;

namespace {

double factorial(index_t n) {
  double f = 1.0;
  for (index_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

TEST_CASE("displaced oscillator eigenvalues") {
  CHECK(dho_eigenvalue(0, 1.0) == -1.0);
  CHECK(dho_eigenvalue(5, 0.5) == 4.75);
  for (index_t l = 0; l < 50; ++l) CHECK(dho_eigenvalue(l + 1, 0.7) - dho_eigenvalue(l, 0.7) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("closed-form coefficients") {
  test::Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const double kappa = rng.uniform(0.05, 3.0);
    const double eps = rng.uniform(-5.0, 10.0);
    CHECK(charlier_phi(0, kappa, eps) == 1.0);
    const double x = eps / kappa;
    CHECK(std::fabs(charlier_phi(1, kappa, eps) - x) <= 4.0 * test::ulp(x));
  }
  CHECK(charlier_phi_zeta(2, 1.0, 4.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(charlier_phi(2, 1.0, -1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(charlier_phi_scaled(300, 1.0, 0.0).log2_abs() ==
        doctest::Approx(-std::lgamma(301.0) / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("closed form equals the shifted-family recurrence") {
  test::Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const double kappa = rng.uniform(0.1, 2.0);
    const double eps = rng.uniform(-kappa * kappa, 10.0);
    const MonicRecurrence rec = MonicRecurrence::dho(kappa, -1);
    for (index_t n = 0; n <= 20; ++n) {
      const double poly = eval_monic(rec, eps / kappa, n).p_n.to_double() / factorial(n);
      REQUIRE(test::rel_diff(charlier_phi(n, kappa, eps), poly) < 1e-10);
    }
  }
}

TEST_CASE("coefficient collapse on the baselines") {
  SUBCASE("ground baseline keeps only the first term") {
    const CollapseReport r = dho_collapse_check(0, 1.0, 60);
    for (index_t n = 0; n <= 60; ++n) {
      CHECK(r.phi_abs[n] == doctest::Approx(1.0 / factorial(n)).epsilon(1e-13));
    }
    CHECK(r.max_rel_deviation < 1e-13);
  }
  SUBCASE("first baseline") {
    const CollapseReport r = dho_collapse_check(1, 1.0, 200);
    // phi_10 = 1/9! - 1/10! = 9/10!, the j = 1 term minus the j = 0 term.
    CHECK(r.phi_abs[10] == doctest::Approx(9.0 / factorial(10)).epsilon(1e-12));
    CHECK(r.leading[10] == doctest::Approx(10.0 / factorial(10)).epsilon(1e-14));
    CHECK(r.next_to_leading[10] == doctest::Approx(1.0 / factorial(10)).epsilon(1e-14));
    CHECK(r.phi_abs[10] == doctest::Approx(r.leading[10] - r.next_to_leading[10]).epsilon(1e-12));
    CHECK(r.max_rel_deviation < 0.011);
  }
  SUBCASE("terms above the baseline index vanish") {
    CHECK(charlier_term_on_baseline(10, 3, 2, 0.8).is_zero());
    CHECK(charlier_term_on_baseline(10, 2, 2, 1.0).to_double() == doctest::Approx(1.0 / factorial(8)));
  }
  SUBCASE("off the spectrum the normalised coefficients grow without bound") {
    const CollapseReport r = dho_collapse_check(0, 1.0, 50);
    for (index_t n = 30; n < 50; ++n) {
      CHECK(std::fabs(r.off_spectrum_normalized[n + 1]) > std::fabs(r.off_spectrum_normalized[n]));
    }
    CHECK(std::fabs(r.off_spectrum_normalized[50]) > 1e50);
    CHECK(r.off_spectrum_ratio > 1e50);
  }
}

TEST_CASE("the shifted-family identity does not hold") {
  CHECK(dho_shift_identity_defect(1.0, 0.3, 2) == doctest::Approx(-1.0));
  CHECK(dho_shift_identity_defect(1.0, 0.3, 1) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("both parities reproduce the closed-form spectrum") {
  const ModelParams p(1.0, 0.0);
  const Spectrum plus = solve_spectrum(p, Parity::Plus, 30);
  const Spectrum minus = solve_spectrum(p, Parity::Minus, 30);
  for (index_t l = 0; l < 30; ++l) {
    CHECK(std::fabs(plus.levels[l].value.epsilon - dho_eigenvalue(l, 1.0)) < 1e-8);
    CHECK(std::fabs(plus.levels[l].value.epsilon - minus.levels[l].value.epsilon) < 1e-8);
  }
}
