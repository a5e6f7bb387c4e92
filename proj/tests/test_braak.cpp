#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rabi/braak.hpp"
#include "rabi/errors.hpp"
#include "support.hpp"

using namespace rabi;

namespace {

const double kReferenceZeta[] = {-0.217805, 0.0629563, 0.86095, 1.1636, 1.85076};

}  // namespace

TEST_CASE("K recursion starts from f_0") {
  const ModelParams p(0.7, 0.4);
  const auto K = braak_K(p, 0.5, 3);
  REQUIRE(K.size() == 4);
  CHECK(K[0].to_double() == 1.0);
  CHECK((K[1] / K[0]).to_double() == doctest::Approx(1.4 - (0.5 - 0.32) / 1.4).epsilon(1e-14));
  const double f1 = schweber_coeffs(p, 0.5, 1);
  CHECK(K[2].to_double() == doctest::Approx((f1 * K[1].to_double() - 1.0) / 2.0));
  CHECK_THROWS_AS(braak_K(p, 2.0, 3), Error);
}

TEST_CASE("G functions") {
  const ModelParams p(0.7, 0.4);
  CHECK_THROWS_AS(braak_G(p, 1.0), Error);
  for (double z = -0.9; z < 3.0; z += 0.0371) {
    const BraakG g = braak_G(p, z);
    CHECK(std::isfinite(g.g_plus));
    CHECK(std::isfinite(g.g_minus));
    CHECK(g.n_used >= 16);
  }
  const ModelParams flat(0.7, 0.0);
  for (double z : {-0.6, 0.3, 1.7, 4.2}) {
    const BraakG g = braak_G(flat, z);
    CHECK(g.g_plus == g.g_minus);
  }
  CHECK_THROWS_AS(braak_G(p, 0.5, 1e-15, 4), Error);
}

TEST_CASE("zeros of G reproduce the reference levels across both functions") {
  const ModelParams p(0.7, 0.4);
  const Spectrum s = braak_spectrum(p, -1.0, 2.0);
  CHECK(s.source == SpectrumSource::Braak);
  REQUIRE(s.levels.size() == 5);
  bool seen_plus = false, seen_minus = false;
  for (index_t k = 0; k < 5; ++k) {
    CHECK(std::fabs(s.levels[k].value.zeta(p) - kReferenceZeta[k]) < 5e-4);
    REQUIRE(s.levels[k].parity.has_value());
    seen_plus = seen_plus || *s.levels[k].parity == Parity::Plus;
    seen_minus = seen_minus || *s.levels[k].parity == Parity::Minus;
  }
  CHECK(seen_plus);
  CHECK(seen_minus);
}

TEST_CASE("G zeros are stable under denser sampling and empty ranges are empty") {
  const ModelParams p(1.4, 0.4);
  const Spectrum a = braak_spectrum(p, -0.5, 4.5, 128);
  const Spectrum b = braak_spectrum(p, -0.5, 4.5, 256);
  REQUIRE(a.levels.size() == b.levels.size());
  for (index_t k = 0; k < a.levels.size(); ++k) {
    CHECK(std::fabs(a.levels[k].value.epsilon - b.levels[k].value.epsilon) < 1e-10);
  }
  CHECK(braak_spectrum(p, 1.0, 1.0).levels.empty());
  CHECK(braak_spectrum(p, 2.0, 1.0).levels.empty());
  CHECK_THROWS_AS(braak_spectrum(p, 0.0, 1.0, 32), Error);
}

TEST_CASE("G zeros agree with the parity solver level by level") {
  for (double kappa : {0.7, 1.4}) {
    const ModelParams p(kappa, 0.4);
    const Spectrum plus = solve_spectrum(p, Parity::Plus, 10);
    const Spectrum minus = solve_spectrum(p, Parity::Minus, 10);
    const Spectrum merged = merge_spectra(plus, minus);
    const double top = merged.levels[9].value.zeta(p);
    const Spectrum braak = braak_spectrum(p, -1.0, top + 0.25);
    REQUIRE(braak.levels.size() >= 10);
    for (index_t k = 0; k < 10; ++k) {
      CHECK(std::fabs(braak.levels[k].value.zeta(p) - merged.levels[k].value.zeta(p)) < 1e-6);
      CHECK(braak.levels[k].parity == merged.levels[k].parity);
    }
  }
}
