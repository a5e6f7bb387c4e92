// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rabi/analysis.hpp"
#include "rabi/braak.hpp"
#include "rabi/dho.hpp"
#include "rabi/errors.hpp"
#include "rabi/ops.hpp"
#include "rabi/spectrum.hpp"
#include "support.hpp"

using namespace rabi;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string num(index_t v) { return std::to_string(v); }

Verdict reference_levels() {
  const ModelParams p(0.7, 0.4);
  const Spectrum merged =
      merge_spectra(solve_spectrum(p, Parity::Plus, 10), solve_spectrum(p, Parity::Minus, 10));
  double worst = 0.0;
  for (double target : {-0.217805, 0.0629563, 0.86095, 1.1636, 1.85076}) {
    double best = std::numeric_limits<double>::infinity();
    for (const EnergyLevel& l : merged.levels) best = std::min(best, std::fabs(l.value.zeta(p) - target));
    worst = std::max(worst, best);
  }
  return {worst < 5e-4, "worst |dzeta| " + num(worst)};
}

Verdict dho_exact() {
  double worst = 0.0;
  for (double kappa : {0.5, 1.0, 1.4}) {
    for (Parity par : {Parity::Plus, Parity::Minus}) {
      const Spectrum s = solve_spectrum(ModelParams(kappa, 0.0), par, 30);
      if (s.levels.size() != 30) return {false, "missing levels"};
      for (index_t l = 0; l < 30; ++l) {
        worst = std::max(worst, std::fabs(s.levels[l].value.epsilon - dho_eigenvalue(l, kappa)));
      }
    }
  }
  return {worst < 1e-8, "worst |deps| " + num(worst)};
}

Verdict cross_method() {
  double worst = 0.0;
  index_t label_mismatches = 0;
  for (double kappa : {0.7, 1.4}) {
    const ModelParams p(kappa, 0.4);
    const Spectrum merged =
        merge_spectra(solve_spectrum(p, Parity::Plus, 10), solve_spectrum(p, Parity::Minus, 10));
    const Spectrum braak = braak_spectrum(p, -1.0, merged.levels[9].value.zeta(p) + 0.25);
    if (braak.levels.size() < 10) return {false, "G zeros found: " + num(braak.levels.size())};
    for (index_t k = 0; k < 10; ++k) {
      worst = std::max(worst, std::fabs(braak.levels[k].value.zeta(p) - merged.levels[k].value.zeta(p)));
      if (braak.levels[k].parity != merged.levels[k].parity) ++label_mismatches;
    }
  }
  return {worst < 1e-6 && label_mismatches == 0,
          "worst |dzeta| " + num(worst) + ", parity mismatches " + num(label_mismatches)};
}

Verdict zero_structure() {
  // Low zeros of neighbouring orders agree to far below double resolution,
  // so equal computed values are counted as ties, not violations.
  test::Rng rng(2024);
  index_t checks = 0, violations = 0, ties = 0;
  double worst_sum = 0.0, worst_forms = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const ModelParams p(rng.uniform(0.2, 2.5), rng.uniform(0.0, 1.5));
    const Parity par = rng.parity();
    const MonicRecurrence rec0 = MonicRecurrence::rabi(p, par, 0);
    const MonicRecurrence rec1 = MonicRecurrence::rabi(p, par, 1);
    std::vector<index_t> orders = {2, 3, 5, 10, 25, 50, 100, 150, 200};
    orders.push_back(rng.index(2, 200));
    for (index_t n : orders) {
      const std::vector<double> zn = poly_zeros(rec0, n);
      const std::vector<double> zm = poly_zeros(rec0, n - 1);
      const std::vector<double> z1 = poly_zeros(rec1, n - 1);
      auto check = [&](double a, double b) {
        ++checks;
        if (a == b) ++ties;
        if (a > b) ++violations;
      };
      for (index_t k = 0; k + 1 < n; ++k) {
        check(zn[k], zm[k]);
        check(zm[k], zn[k + 1]);
        check(zn[k], z1[k]);
        check(z1[k], zn[k + 1]);
      }
      ScaledValue total;
      for (index_t k = 0; k < n; ++k) {
        const WeightForms w = weight_forms(rec0, n, zn[k]);
        ++checks;
        if (!(w.sum_form.sign() > 0)) ++violations;
        const double rel = std::fabs(((w.sum_form - w.christoffel_darboux_form) / w.sum_form).to_double());
        worst_forms = std::max(worst_forms, rel);
        if (!(rel < 1e-8)) ++violations;
        total += w.sum_form;
      }
      const double sum_err = std::fabs(total.to_double() - 1.0);
      worst_sum = std::max(worst_sum, sum_err);
      ++checks;
      if (!(sum_err < 1e-10)) ++violations;
    }
  }
  return {violations == 0, num(checks) + " checks, " + num(violations) + " violations, " +
                               num(ties) + " exact ties, worst |sum M - 1| " + num(worst_sum) +
                               ", worst weight-form gap " + num(worst_forms)};
}

Verdict monotone_branches() {
  index_t gaps = 0, bad = 0, resolved = 0;
  for (auto [kappa, delta] : {std::pair{0.7, 0.4}, std::pair{1.4, 0.4}, std::pair{0.5, 1.0}}) {
    const ModelParams p(kappa, delta);
    for (Parity par : {Parity::Plus, Parity::Minus}) {
      const MonicRecurrence rec0 = MonicRecurrence::rabi(p, par, 0);
      const std::vector<Bracket> br = pole_brackets(rec0, 2000, 50, default_x_floor(p));
      const Evaluator F = [&](double x) { return F_rabi(p, par, x); };
      for (index_t k = 1; k < br.size(); ++k) {
        const BranchScan s = monotone_branch_scan(F, br[k], 64);
        ++gaps;
        if (!s.strictly_decreasing || s.sign_changes != 1) ++bad;
        if (s.resolved == 1) ++resolved;
      }
    }
  }
  return {bad == 0, num(gaps) + " gaps, " + num(bad) + " failures, " + num(resolved) +
                        " with the sign change between finite samples"};
}

Verdict evaluator_equivalence() {
  test::Rng rng(6);
  double worst = 0.0;
  index_t points = 0;
  for (auto [kappa, delta] : {std::pair{0.7, 0.4}, std::pair{1.4, 0.4}, std::pair{1.0, 0.0}}) {
    const ModelParams p(kappa, delta);
    for (Parity par : {Parity::Plus, Parity::Minus}) {
      const MonicRecurrence r0 = MonicRecurrence::rabi(p, par, 0);
      const MonicRecurrence r1 = MonicRecurrence::rabi(p, par, 1);
      for (int tested = 0; tested < 100;) {
        const double x = rng.uniform(-3.0, 8.0);
        double conv = 0.0;
        try {
          conv = convergent(r0, r1, rabi_raw_coeffs(p, par, x, 0).a, x, 1000);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::NearPole) continue;
          throw;
        }
        worst = std::max(worst, std::fabs(F_rabi(p, par, x) - conv));
        ++tested;
        ++points;
      }
    }
  }
  return {worst < 1e-8, num(points) + " points, worst |dF| " + num(worst)};
}

Verdict nondegeneracy() {
  const ModelParams p(1.4, 0.4);
  double gap = std::numeric_limits<double>::infinity();
  for (Parity par : {Parity::Plus, Parity::Minus}) {
    const Spectrum s = solve_spectrum(p, par, 100);
    if (s.levels.size() != 100) return {false, "missing levels"};
    for (index_t k = 1; k < 100; ++k) {
      gap = std::min(gap, s.levels[k].value.epsilon - s.levels[k - 1].value.epsilon);
    }
  }
  return {gap > 1e-6, "minimum gap " + num(gap)};
}

Verdict capacity() {
  const ModelParams p(1.4, 0.4);
  std::string detail;
  bool ok = true;
  for (Parity par : {Parity::Plus, Parity::Minus}) {
    CapacityOptions opts;
    opts.budget_seconds = 55.0;
    const CapacityReport r = capacity_probe(p, par, 2500, opts);
    ok = ok && r.levels_computed >= 500;
    if (!detail.empty()) detail += ", ";
    detail += std::string(to_string(par)) + " " + num(r.levels_computed) + " levels (ceiling 2500)";
  }
  return {ok, detail};
}

Verdict oracle() {
  test::Rng rng(91);
  double worst = 0.0, worst_ulps = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const double kappa = rng.uniform(0.1, 2.0);
    const double eps = rng.uniform(-kappa * kappa, 10.0);
    const double x = eps / kappa;
    const MonicRecurrence rec = MonicRecurrence::dho(kappa, -1);
    double fact = 1.0;
    for (index_t n = 0; n <= 20; ++n) {
      if (n > 0) fact *= static_cast<double>(n);
      const double poly = eval_monic(rec, x, n).p_n.to_double() / fact;
      worst = std::max(worst, test::rel_diff(charlier_phi(n, kappa, eps), poly));
    }
    const double ratio = charlier_phi(1, kappa, eps) / charlier_phi(0, kappa, eps);
    worst_ulps = std::max(worst_ulps, std::fabs(ratio - x) / test::ulp(x));
  }
  return {worst < 1e-10 && worst_ulps <= 4.0,
          "worst relative " + num(worst) + ", phi1/phi0 within " + num(worst_ulps) + " ulp"};
}

Verdict picket_fence() {
  const SpacingStats st = spacing_stats(solve_spectrum(ModelParams(1.0, 0.0), Parity::Plus, 30));
  double worst = 0.0;
  for (double s : st.spacings) worst = std::max(worst, std::fabs(s - 1.0));
  return {st.count == 29 && worst < 1e-8, num(st.count) + " spacings, worst |s - 1| " + num(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"reference spectrum", 5.0, reference_levels},
      {"displaced oscillator exactness", 5.0, dho_exact},
      {"G zeros vs parity solver", 30.0, cross_method},
      {"zero interlacing and weights", 60.0, zero_structure},
      {"monotone branches", 30.0, monotone_branches},
      {"evaluator equivalence", 10.0, evaluator_equivalence},
      {"nondegeneracy", 0.0, nondegeneracy},
      {"capacity", 120.0, capacity},
      {"closed-form oracle", 0.0, oracle},
      {"picket-fence statistics", 0.0, picket_fence},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
      v.pass = false;
      v.detail += ", over the " + num(c.limit_seconds) + " s limit";
    }
    if (!v.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", index, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
