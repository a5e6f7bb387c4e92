#include "rabi/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "parallel.hpp"
#include "rabi/dho.hpp"
#include "rabi/errors.hpp"
#include "rabi/ops.hpp"

namespace rabi {

std::string_view to_string(ScanVariable v) noexcept { return v == ScanVariable::X ? "x" : "zeta"; }

namespace {

constexpr double kMasked = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ScanSeries scan_F(const ModelParams& params, const ScanTarget& target, double lo, double hi,
                  index_t samples, index_t n_trunc) {
  require(samples >= 2, "a scan needs at least two samples");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "scan range must be finite and ordered");
  ScanSeries s;
  s.variable = target.parity ? ScanVariable::X : ScanVariable::Zeta;
  s.t.resize(samples);
  s.F.resize(samples);
  for (index_t i = 0; i < samples; ++i) {
    s.t[i] = (i + 1 == samples) ? hi : lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
  }

  if (target.parity) {
    const Parity p = *target.parity;
    const MonicRecurrence rec0 = MonicRecurrence::rabi(params, p, 0);
    const index_t N = std::max<index_t>(n_trunc, 1);
    const index_t below = sturm_count(rec0, lo, N);
    const index_t upto = sturm_count(rec0, hi, N);
    if (upto > below) s.poles = poly_zeros(rec0, N, below + 1, upto);
    detail::parallel_for(samples, 0, [&](std::size_t i) {
      const double t = s.t[i];
      const auto it = std::lower_bound(s.poles.begin(), s.poles.end(), t - kPoleTolerance);
      if (it != s.poles.end() && std::fabs(*it - t) < kPoleTolerance) {
        s.F[i] = kMasked;
      } else {
        s.F[i] = F_rabi(params, p, t);
      }
    });
    return s;
  }

  detail::parallel_for(samples, 0, [&](std::size_t i) {
    const double t = s.t[i];
    const double m = std::round(t);
    s.F[i] = (m >= 0.0 && std::fabs(t - m) < kPoleTolerance) ? kMasked : F_schweber(params, t);
  });
  // Integer poles inside the range, then sign changes that grow under bisection.
  std::vector<double> poles;
  for (double m = std::max(0.0, std::ceil(lo)); m <= hi; m += 1.0) poles.push_back(m);
  const Evaluator F = [&](double z) { return F_schweber(params, z); };
  for (index_t i = 0; i + 1 < samples; ++i) {
    const double fa0 = s.F[i], fb0 = s.F[i + 1];
    if (ScanSeries::masked(fa0) || ScanSeries::masked(fb0)) continue;
    if ((fa0 > 0.0) == (fb0 > 0.0) || fa0 == 0.0 || fb0 == 0.0) continue;
    double a = s.t[i], b = s.t[i + 1];
    if (std::any_of(poles.begin(), poles.end(), [&](double p) { return p > a && p < b; })) continue;
    double fa = fa0, fb = fb0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double m = std::round(mid);
      if (m >= 0.0 && std::fabs(mid - m) < kPoleTolerance) break;
      const double fm = F(mid);
      if (fm == 0.0) break;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    if (std::min(std::fabs(fa), std::fabs(fb)) > std::max(std::fabs(fa0), std::fabs(fb0))) {
      poles.push_back(0.5 * (a + b));
    }
  }
  std::sort(poles.begin(), poles.end());
  s.poles = poles;
  return s;
}

index_t count_zero_crossings(const ScanSeries& series) {
  index_t count = 0;
  index_t prev = series.t.size();
  for (index_t i = 0; i < series.t.size(); ++i) {
    if (ScanSeries::masked(series.F[i])) continue;
    if (prev < series.t.size()) {
      const double fa = series.F[prev], fb = series.F[i];
      const bool change = (fa > 0.0 && fb <= 0.0) || (fa < 0.0 && fb >= 0.0);
      const double a = series.t[prev], b = series.t[i];
      const bool pole_between =
          std::any_of(series.poles.begin(), series.poles.end(),
                      [&](double p) { return p >= a && p <= b; });
      if (change && !pole_between && fa != 0.0) ++count;
    }
    prev = i;
  }
  return count;
}

BranchScan monotone_branch_scan(const Evaluator& F, const Bracket& gap, index_t points) {
  require(points >= 4 && points % 2 == 0, "branch scan needs an even number of at least 4 points");
  require(gap.lo < gap.hi, "branch gap must be ordered");
  const double w = gap.hi - gap.lo;
  const index_t half = points / 2;
  auto closest = [&](double end) {
    return 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(end), w);
  };
  BranchScan s;
  s.t.resize(points);
  const double d_lo = closest(gap.lo), d_hi = closest(gap.hi);
  for (index_t j = 0; j < half; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(half);
    s.t[j] = gap.lo + d_lo * std::pow(0.5 * w / d_lo, frac);
    s.t[points - 1 - j] = gap.hi - d_hi * std::pow(0.5 * w / d_hi, frac);
  }
  s.F.resize(points);
  for (index_t i = 0; i < points; ++i) s.F[i] = F(s.t[i]);

  std::vector<double> seq;
  if (gap.lo_is_pole) seq.push_back(std::numeric_limits<double>::infinity());
  seq.insert(seq.end(), s.F.begin(), s.F.end());
  if (gap.hi_is_pole) seq.push_back(-std::numeric_limits<double>::infinity());
  for (index_t i = 0; i + 1 < points; ++i) {
    if (!(s.F[i + 1] < s.F[i])) s.strictly_decreasing = false;
    if ((s.F[i] > 0.0) != (s.F[i + 1] > 0.0)) ++s.resolved;
  }
  for (index_t i = 0; i + 1 < seq.size(); ++i) {
    if ((seq[i] > 0.0) != (seq[i + 1] > 0.0)) ++s.sign_changes;
  }
  return s;
}

SpacingStats spacing_stats(const Spectrum& spec) {
  if (spec.levels.size() < 3) {
    fail(ErrorKind::TooFewLevels, "spacing statistics need at least 3 levels, got " +
                                      std::to_string(spec.levels.size()));
  }
  const auto& first = spec.levels.front().parity;
  for (const auto& lv : spec.levels) {
    require(lv.parity == first, "spacing statistics must be taken within one parity");
  }
  std::vector<double> values;
  values.reserve(spec.levels.size());
  for (const auto& lv : spec.levels) values.push_back(lv.value.epsilon);
  std::sort(values.begin(), values.end());

  std::vector<double> raw(values.size() - 1);
  for (index_t k = 0; k + 1 < values.size(); ++k) raw[k] = values[k + 1] - values[k];
  double total = 0.0;
  for (double d : raw) total += d;
  const double mean_spacing = total / static_cast<double>(raw.size());
  std::vector<double> spacings;
  spacings.reserve(raw.size());
  for (double d : raw) spacings.push_back(d / mean_spacing);
  return summarize_spacings(std::move(spacings), mean_spacing);
}

SpacingStats summarize_spacings(std::vector<double> spacings, double mean_spacing) {
  if (spacings.empty()) fail(ErrorKind::TooFewLevels, "no spacings to summarize");
  SpacingStats st;
  st.mean_spacing = mean_spacing;
  st.count = spacings.size();
  double sum = 0.0;
  for (double s : spacings) {
    sum += s;
    if (s >= kHistogramMax || s < 0.0) {
      ++st.overflow;
    } else {
      ++st.histogram[static_cast<index_t>(s / kHistogramMax * kHistogramBins)];
    }
  }
  st.spacings = std::move(spacings);
  st.mean = sum / static_cast<double>(st.count);
  st.min = *std::min_element(st.spacings.begin(), st.spacings.end());
  st.max = *std::max_element(st.spacings.begin(), st.spacings.end());
  return st;
}

CapacityReport capacity_probe(const ModelParams& params, Parity parity, index_t n_ceiling,
                              const CapacityOptions& opts) {
  require(n_ceiling >= 1, "capacity ceiling must be positive");
  require(opts.budget_seconds >= 0.0, "budget must be non-negative");
  CapacityReport report;
  report.n_ceiling = n_ceiling;
  const auto start = std::chrono::steady_clock::now();
  if (opts.budget_seconds == 0.0) return report;

  SolverOptions so;
  so.workers = opts.workers;
  so.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(opts.budget_seconds));
  const Spectrum spec = solve_spectrum(params, parity, n_ceiling, so);
  report.n_trunc = spec.n_trunc;

  const bool oracle = params.delta() == 0.0;
  for (const EnergyLevel& lv : spec.levels) {
    CapacityFailure f{lv.k, lv.value.x(params), lv.residual, lv.shift, {}};
    if (!(lv.residual < opts.residual_tol)) {
      f.reason = "residual";
    } else if (!(lv.shift < opts.stability_tol)) {
      f.reason = "stability";
    } else if (oracle &&
               std::fabs(lv.value.epsilon - dho_eigenvalue(lv.k, params.kappa())) > kResidualTol) {
      f.reason = "closed form";
    }
    if (!f.reason.empty()) {
      report.first_failure = f;
      break;
    }
    ++report.levels_computed;
  }
  if (!report.first_failure && report.levels_computed < n_ceiling) {
    report.first_failure =
        CapacityFailure{report.levels_computed, 0.0, 0.0, 0.0, "budget exhausted"};
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace rabi
