#include <doctest.h>

#include <limits>

#include "rabi/errors.hpp"
#include "rabi/model.hpp"
#include "support.hpp"

using namespace rabi;

TEST_CASE("model parameters are validated") {
  CHECK_NOTHROW(ModelParams(0.7, 0.4));
  CHECK_THROWS_AS(ModelParams(0.0, 0.4), Error);
  CHECK_THROWS_AS(ModelParams(-1.0, 0.4), Error);
  CHECK_THROWS_AS(ModelParams(1.0, -0.1), Error);
  CHECK_THROWS_AS(ModelParams(1.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 0.0), Error);
  try {
    ModelParams(0.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("parity labels") {
  CHECK(parse_parity("plus") == Parity::Plus);
  CHECK(parse_parity("minus") == Parity::Minus);
  CHECK_FALSE(parse_parity("both").has_value());
  CHECK(opposite(Parity::Plus) == Parity::Minus);
  CHECK(to_string(Parity::Minus) == "minus");
}

TEST_CASE("rabi raw coefficients") {
  SUBCASE("trivial reduction at the origin") {
    const RawCoeffs c = rabi_raw_coeffs(ModelParams(1.0, 0.0), Parity::Plus, 0.0, 0);
    CHECK(c.a == 0.0);
    CHECK(c.b == 1.0);
  }
  SUBCASE("first row, plus parity") {
    const RawCoeffs c = rabi_raw_coeffs(ModelParams(0.7, 0.4), Parity::Plus, 1.0, 1);
    CHECK(c.a == doctest::Approx(-1.0 / 14.0).epsilon(1e-14));
    CHECK(c.b == 0.5);
  }
  SUBCASE("zeroth row is -x +- delta/kappa") {
    const ModelParams p(0.7, 0.4);
    CHECK(rabi_raw_coeffs(p, Parity::Plus, 0.0, 0).a == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(rabi_raw_coeffs(p, Parity::Minus, 0.0, 0).a == doctest::Approx(-4.0 / 7.0).epsilon(1e-14));
    CHECK(rabi_raw_coeffs(p, Parity::Minus, 0.0, 0).b == 1.0);
    CHECK(rabi_raw_coeffs(p, Parity::Minus, 2.0, 0).a == doctest::Approx(-2.0 - 4.0 / 7.0));
  }
}

TEST_CASE("monic families") {
  const ModelParams p(1.0, 0.0);
  const MonicRecurrence r0 = MonicRecurrence::rabi(p, Parity::Plus, 0);
  CHECK(r0(1).c == 1.0);
  CHECK(r0(2).c == 2.0);
  CHECK(r0(2).lambda == 2.0);
  const MonicRecurrence r1 = MonicRecurrence::rabi(p, Parity::Plus, 1);
  CHECK(r1(1).c == 2.0);
  CHECK(r1(1).lambda == 2.0);
  const MonicRecurrence rm = MonicRecurrence::rabi(p, Parity::Plus, -1);
  CHECK(rm(1).c == 0.0);
  CHECK(rm(1).lambda == 1.0);
  CHECK_THROWS_AS(MonicRecurrence::rabi(p, Parity::Plus, 2), Error);
  CHECK(rabi_monic_family(p, Parity::Minus, 0)(3).c == r0(3).c);
}

TEST_CASE("monic families have positive lambda") {
  test::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p(rng.uniform(0.1, 3.0), rng.uniform(0.0, 2.0));
    const Parity par = rng.parity();
    for (int alpha : {-1, 0, 1}) {
      const MonicRecurrence rec = MonicRecurrence::rabi(p, par, alpha);
      for (index_t n = 1; n <= 300; ++n) {
        const double lambda = rec(n).lambda;
        REQUIRE(lambda > 0.0);
        if (alpha == -1) CHECK(lambda == (n == 1 ? 1.0 : static_cast<double>(n - 1)));
      }
    }
  }
}

TEST_CASE("schweber coefficients") {
  const ModelParams p(0.7, 0.4);
  CHECK(schweber_coeffs(p, 0.5, 0) == doctest::Approx(1.4 - (0.5 - 0.32) / 1.4).epsilon(1e-14));
  CHECK(schweber_coeffs(p, 0.5, 1) == doctest::Approx(1.4 + (0.5 - 0.32) / 1.4).epsilon(1e-14));
  CHECK_THROWS_AS(schweber_coeffs(p, 1.0, 0), Error);
  CHECK_THROWS_AS(schweber_coeffs(p, 1.0, 5), Error);
  CHECK_THROWS_AS(check_off_integer_pole(3.0 + 1e-10), Error);
  CHECK_NOTHROW(check_off_integer_pole(3.0 + 1e-8));
  CHECK_NOTHROW(check_off_integer_pole(-1.0));
  const RawCoeffs c = schweber_raw_coeffs(p, 0.5, 1);
  CHECK(c.a == doctest::Approx(-schweber_coeffs(p, 0.5, 1) / 2.0));
  CHECK(c.b == 0.5);
}

TEST_CASE("displaced oscillator coefficients") {
  CHECK(dho_raw_coeffs(1.0, 0.0, 0).a == 0.0);
  CHECK(dho_raw_coeffs(1.0, 0.0, 2).a == doctest::Approx(2.0 / 3.0));
  CHECK(dho_raw_coeffs(1.0, 0.0, 2).b == doctest::Approx(1.0 / 3.0));

  test::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const double kappa = rng.uniform(1e-3, 5.0);
    const double x = rng.uniform(-10.0, 10.0);
    const ModelParams p(kappa, 0.0);
    for (index_t n = 0; n <= 1000; n += 7) {
      const RawCoeffs d = dho_raw_coeffs(kappa, x, n);
      const RawCoeffs r = rabi_raw_coeffs(p, Parity::Plus, x, n);
      REQUIRE(d.a == doctest::Approx(r.a).epsilon(1e-12).scale(1.0));
      REQUIRE(d.b == r.b);
    }
  }
}

TEST_CASE("energy conversions") {
  CHECK(energy_convert(-1.0, EnergyRep::X, EnergyRep::Epsilon, ModelParams(1.0, 0.0)) == -1.0);
  CHECK(energy_convert(0.0, EnergyRep::Zeta, EnergyRep::Epsilon, ModelParams(0.7, 0.0)) ==
        doctest::Approx(-0.49).epsilon(1e-15));
  CHECK(energy_convert(-0.49, EnergyRep::Epsilon, EnergyRep::E, ModelParams(0.7, 0.0, 2.0)) ==
        doctest::Approx(-0.98).epsilon(1e-15));

  test::Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const ModelParams p(rng.uniform(0.05, 4.0), rng.uniform(0.0, 2.0), rng.uniform(0.1, 3.0));
    const EnergyValue e{rng.uniform(-20.0, 20.0)};
    for (EnergyRep rep : {EnergyRep::X, EnergyRep::Zeta, EnergyRep::E}) {
      const double back = EnergyValue::from(e.as(rep, p), rep, p).epsilon;
      const double mag = std::max(std::fabs(e.epsilon), p.kappa() * p.kappa());
      const double ulp = std::nextafter(mag, 2.0 * mag) - mag;
      REQUIRE(std::fabs(back - e.epsilon) <= 4.0 * ulp);
    }
  }
}

TEST_CASE("raw recurrences carry a settle index past the turning point") {
  const ModelParams p(1.4, 0.4);
  CHECK(rabi_recurrence(p, Parity::Plus, 3.0).settle_index() >= 5);
  CHECK(dho_recurrence(1.0, 3.0).settle_index() >= 3);
  CHECK(schweber_recurrence(p, 2.5).settle_index() >= 3);
  CHECK_THROWS_AS(schweber_recurrence(p, 2.0), Error);
}

TEST_CASE("growth condition onset is finite") {
  test::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams p(rng.uniform(0.1, 3.0), rng.uniform(0.0, 2.0));
    const auto onset = growth_condition_onset(p, rng.parity(), 100000);
    REQUIRE(onset.has_value());
    CHECK(*onset < 100000);
  }
}
