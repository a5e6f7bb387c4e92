#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr int kStopRun = 8;
constexpr double kCancellationLimit = 1e3;
constexpr index_t kLeadingGrid = 64;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

// ---------------------------------------------------------------------------

double F_backward(const RawRecurrence& rec, index_t depth) {
  double t = 0.0;
  for (index_t l = depth; l >= 1; --l) {
    const RawCoeffs c = rec(l);
    t = -c.b / (c.a + t);
  }
  return rec(0).a + t;
}

CfResult F_cf(const RawRecurrence& rec, const CfOptions& opts) {
  require(opts.n_max >= 16, "n_max must be at least 16");
  require(opts.tol > 0.0, "tolerance must be positive");
  const double a0 = rec(0).a;
  const index_t settle = rec.settle_index();

  const RawCoeffs c1 = rec(1);
  ScaledValue prod(-c1.b / c1.a);
  ScaledValue sum = prod;
  ScaledValue abs_sum = prod.abs();
  double u_prev = 1.0;
  double a_prev = c1.a;
  bool broken = !prod.is_finite();
  bool converged = false;
  int small_run = 0;
  index_t l = 1;

  while (!broken && l < opts.n_max) {
    ++l;
    const RawCoeffs c = rec(l);
    const double u = 1.0 / (1.0 - u_prev * c.b / (c.a * a_prev));
    const double rho = u - 1.0;
    if (!std::isfinite(rho)) {
      broken = true;
      break;
    }
    prod *= ScaledValue(rho);
    sum += prod;
    abs_sum += prod.abs();
    u_prev = u;
    a_prev = c.a;
    if (l > settle) {
      const double acc = std::fabs(a0 + sum.to_double());
      if (abs_less(prod, ScaledValue(opts.tol * std::max(1.0, acc)))) {
        if (++small_run >= kStopRun) {
          converged = true;
          break;
        }
      } else {
        small_run = 0;
      }
    }
  }

  CfResult out;
  out.n_used = l;
  out.value = a0 + sum.to_double();
  const bool cancelled =
      converged && abs_less(ScaledValue(kCancellationLimit * std::max(1.0, std::fabs(out.value))),
                            abs_sum);
  if (converged && !cancelled) return out;
  if (!opts.allow_fallback) {
    if (converged) return out;
    fail(ErrorKind::NoConvergence,
         broken ? "continued-fraction series broke down at term " + std::to_string(l)
                : "continued-fraction series did not meet tol within n_max = " +
                      std::to_string(opts.n_max));
  }

  index_t depth = std::max(l, settle + 32) + 32;
  double value = F_backward(rec, depth);
  for (;;) {
    const index_t next_depth = 2 * depth;
    const double refined = F_backward(rec, next_depth);
    const bool agree = std::fabs(refined - value) <= opts.tol * std::max(1.0, std::fabs(refined));
    value = refined;
    depth = next_depth;
    if (agree) break;
    if (depth > opts.n_max) {
      fail(ErrorKind::NoConvergence,
           "backward continued fraction did not settle within n_max = " +
               std::to_string(opts.n_max));
    }
  }
  out.value = value;
  out.n_used = depth;
  out.backward = true;
  return out;
}

double F_rabi(const ModelParams& params, Parity parity, double x, const CfOptions& opts) {
  return F_cf(rabi_recurrence(params, parity, x), opts).value;
}

double F_schweber(const ModelParams& params, double zeta, const CfOptions& opts) {
  return F_cf(schweber_recurrence(params, zeta), opts).value;
}

// ---------------------------------------------------------------------------

double default_x_floor(const ModelParams& params) {
  return -(params.kappa() + params.delta() / params.kappa() + 2.0);
}

std::vector<Bracket> pole_brackets(const MonicRecurrence& rec0, index_t N, index_t count,
                                   double x_floor, double tol) {
  require(count + 1 <= N, "bracket count must satisfy count <= N - 1");
  const std::vector<double> nodes = poly_zeros(rec0, N, 1, count + 1, tol);
  std::vector<Bracket> out;
  out.reserve(count + 1);
  out.push_back({x_floor, nodes[0], false, true});
  for (index_t k = 0; k < count; ++k) out.push_back({nodes[k], nodes[k + 1], true, true});
  return out;
}

RootResult find_root(const Evaluator& F, const Bracket& bracket, double tol) {
  require(bracket.lo < bracket.hi, "bracket must satisfy lo < hi");
  std::vector<std::pair<double, double>> samples;
  auto eval = [&](double x) {
    const double f = F(x);
    samples.emplace_back(x, f);
    return f;
  };

  const double width = bracket.hi - bracket.lo;
  double shrink = std::max(1e-9, 1e-3 * width);
  if (shrink >= 0.25 * width) shrink = 0.25 * width;
  double lo = bracket.lo_is_pole ? bracket.lo + shrink : bracket.lo;
  double hi = bracket.hi_is_pole ? bracket.hi - shrink : bracket.hi;
  double f_lo = eval(lo);
  double f_hi = eval(hi);

  RootResult out;
  auto pole_adjacent = [&](double value, double pole_lo, double pole_hi) {
    out.value = value;
    out.lo = pole_lo;
    out.hi = pole_hi;
    out.residual = pole_hi - pole_lo;
    out.pole_adjacent = true;
    return out;
  };

  if (!(f_lo > 0.0)) {
    if (!bracket.lo_is_pole) {
      fail(ErrorKind::NoRootInBracket, "F <= 0 at the lower end " + std::to_string(lo));
    }
    // The root sits between the pole and lo: creep towards the pole.
    const double min_gap = 4.0 * (std::nextafter(std::fabs(bracket.lo), INFINITY) -
                                  std::fabs(bracket.lo)) + std::numeric_limits<double>::denorm_min();
    hi = lo;
    f_hi = f_lo;
    bool found = false;
    for (double d = shrink * 1e-3;; d *= 1e-3) {
      const double gap = std::max(d, min_gap);
      const double x = bracket.lo + gap;
      const double fx = eval(x);
      if (fx > 0.0) {
        lo = x;
        f_lo = fx;
        found = true;
        break;
      }
      hi = x;
      f_hi = fx;
      if (gap <= min_gap) break;
    }
    if (!found) return pole_adjacent(hi, bracket.lo, hi);
  } else if (!(f_hi < 0.0)) {
    if (!bracket.hi_is_pole) {
      fail(ErrorKind::NoRootInBracket, "F >= 0 at the upper end " + std::to_string(hi));
    }
    const double min_gap = 4.0 * (std::nextafter(std::fabs(bracket.hi), INFINITY) -
                                  std::fabs(bracket.hi)) + std::numeric_limits<double>::denorm_min();
    lo = hi;
    f_lo = f_hi;
    bool found = false;
    for (double d = shrink * 1e-3;; d *= 1e-3) {
      const double gap = std::max(d, min_gap);
      const double x = bracket.hi - gap;
      const double fx = eval(x);
      if (fx < 0.0) {
        hi = x;
        f_hi = fx;
        found = true;
        break;
      }
      lo = x;
      f_lo = fx;
      if (gap <= min_gap) break;
    }
    if (!found) return pole_adjacent(lo, lo, bracket.hi);
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::fabs(mid)) || mid <= lo || mid >= hi) break;
    const double fm = eval(mid);
    if (fm > 0.0) {
      lo = mid;
      f_lo = fm;
    } else if (fm < 0.0) {
      hi = mid;
      f_hi = fm;
    } else {
      lo = hi = mid;
      f_lo = f_hi = 0.0;
      break;
    }
  }

  out.value = 0.5 * (lo + hi);
  out.lo = lo;
  out.hi = hi;
  const double f_value = (lo == hi) ? f_lo : F(out.value);
  const double slope = (hi > lo) ? (f_hi - f_lo) / (hi - lo) : 0.0;
  out.residual = std::fabs(f_value) / std::max(1.0, std::fabs(slope));

  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].second > samples[i - 1].second) {
      out.monotone = false;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(SpectrumSource s) noexcept {
  switch (s) {
    case SpectrumSource::Parity: return "parity";
    case SpectrumSource::Merged: return "merged";
    case SpectrumSource::Schweber: return "schweber";
    case SpectrumSource::Braak: return "braak";
  }
  return "?";
}

namespace {

struct SolvePass {
  std::vector<RootResult> roots;
  index_t leading_roots = 0;
  bool truncated = false;
};

SolvePass solve_pass(const ModelParams& params, Parity parity, index_t n_levels, index_t N,
                     const SolverOptions& opts) {
  const MonicRecurrence rec0 = MonicRecurrence::rabi(params, parity, 0);
  const double x_floor = opts.x_floor.value_or(default_x_floor(params));
  const std::vector<Bracket> brackets = pole_brackets(rec0, N, n_levels, x_floor);
  const Evaluator F = [&](double x) { return F_rabi(params, parity, x, opts.cf); };

  SolvePass pass;
  // Leading interval: scanned, since the paper fixes its root count only via a_0.
  const Bracket& lead = brackets.front();
  require(x_floor < lead.hi, "x_floor must lie below the first pole");
  std::vector<double> grid(kLeadingGrid), values(kLeadingGrid);
  const double shrink = std::max(1e-9, 1e-3 * (lead.hi - x_floor));
  const double top = lead.hi - shrink;
  for (index_t i = 0; i < kLeadingGrid; ++i) {
    grid[i] = x_floor + (top - x_floor) * static_cast<double>(i) / (kLeadingGrid - 1);
    values[i] = F(grid[i]);
  }
  for (index_t i = 0; i + 1 < kLeadingGrid; ++i) {
    if (values[i] > 0.0 && values[i + 1] <= 0.0) {
      pass.roots.push_back(find_root(F, {grid[i], grid[i + 1], false, false}, opts.tol));
    } else if (values[i] == 0.0 && i == 0) {
      pass.roots.push_back({grid[0], grid[0], grid[0], 0.0, false, true});
    }
  }
  if (values.back() > 0.0) {
    try {
      pass.roots.push_back(find_root(F, {grid.back(), lead.hi, false, true}, opts.tol));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoRootInBracket) throw;
    }
  }
  pass.leading_roots = pass.roots.size();

  const index_t needed = n_levels > pass.leading_roots ? n_levels - pass.leading_roots : 0;
  std::vector<std::optional<RootResult>> interior(needed);
  detail::parallel_for(needed, opts.workers, [&](std::size_t i) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) return;
    interior[i] = find_root(F, brackets[i + 1], opts.tol);
  });
  for (auto& r : interior) {
    if (!r) {
      pass.truncated = true;
      break;
    }
    pass.roots.push_back(*r);
  }
  if (pass.roots.size() > n_levels) pass.roots.resize(n_levels);
  return pass;
}

}  // namespace

Spectrum solve_spectrum(const ModelParams& params, Parity parity, index_t n_levels,
                        const SolverOptions& opts) {
  require(n_levels >= 1, "at least one level must be requested");
  require(opts.tol > 0.0, "tolerance must be positive");
  const index_t N = std::max(opts.n_trunc, 4 * n_levels);
  const SolvePass base = solve_pass(params, parity, n_levels, N, opts);

  Spectrum spec;
  spec.params = params;
  spec.source = SpectrumSource::Parity;
  spec.parity = parity;
  spec.tol = opts.tol;
  spec.n_trunc = N;
  spec.leading_roots = base.leading_roots;

  std::optional<SolvePass> check;
  if (opts.check_stability) {
    spec.n_trunc_check = 2 * N;
    check = solve_pass(params, parity, base.roots.size() == 0 ? 1 : base.roots.size(), 2 * N, opts);
  }

  for (index_t k = 0; k < base.roots.size(); ++k) {
    const RootResult& r = base.roots[k];
    EnergyLevel level;
    level.k = k;
    level.parity = parity;
    level.value = EnergyValue::from(r.value, EnergyRep::X, params);
    level.bracket_lo = r.lo;
    level.bracket_hi = r.hi;
    level.residual = r.residual;
    level.n_trunc = N;
    level.pole_adjacent = r.pole_adjacent;
    level.monotone = r.monotone;
    if (check && k < check->roots.size()) {
      level.shift = std::fabs(check->roots[k].value - r.value);
      level.stable = level.shift < kStabilityTol;
    } else {
      level.shift = nan();
      level.stable = false;
    }
    spec.levels.push_back(level);
  }
  return spec;
}

Spectrum merge_spectra(const Spectrum& plus, const Spectrum& minus) {
  require(plus.params == minus.params, "merged spectra must share parameters");
  Spectrum out = plus;
  out.source = SpectrumSource::Merged;
  out.parity.reset();
  out.levels.insert(out.levels.end(), minus.levels.begin(), minus.levels.end());
  std::stable_sort(out.levels.begin(), out.levels.end(),
                   [](const EnergyLevel& a, const EnergyLevel& b) {
                     return a.value.epsilon < b.value.epsilon;
                   });
  out.n_trunc = std::max(plus.n_trunc, minus.n_trunc);
  out.n_trunc_check = std::max(plus.n_trunc_check, minus.n_trunc_check);
  out.leading_roots = plus.leading_roots + minus.leading_roots;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kSegmentInset = 1e-7;

struct SegmentScan {
  double lo;
  double hi;
};

std::vector<SegmentScan> integer_segments(double lo, double hi) {
  std::vector<SegmentScan> segs;
  if (!(hi > lo)) return segs;
  auto near_pole = [](double z) {
    const double m = std::round(z);
    return m >= 0.0 && std::fabs(z - m) < kSegmentInset;
  };
  double start = near_pole(lo) ? std::round(lo) + kSegmentInset : lo;
  for (double m = std::max(0.0, std::floor(start) + 1.0); m < hi; m += 1.0) {
    if (m - kSegmentInset > start) segs.push_back({start, m - kSegmentInset});
    start = m + kSegmentInset;
  }
  const double end = near_pole(hi) ? std::round(hi) - kSegmentInset : hi;
  if (end > start) segs.push_back({start, end});
  return segs;
}

}  // namespace

std::vector<ScanRoot> scan_sign_changes(const Evaluator& F, double lo, double hi,
                                        index_t samples_per_unit, double tol) {
  require(samples_per_unit >= 2, "at least two samples per unit are required");
  std::vector<ScanRoot> out;
  for (const SegmentScan& seg : integer_segments(lo, hi)) {
    const index_t n = std::max<index_t>(
        2, static_cast<index_t>(std::ceil((seg.hi - seg.lo) * samples_per_unit)) + 1);
    std::vector<double> t(n), f(n);
    for (index_t i = 0; i < n; ++i) {
      t[i] = (i + 1 == n) ? seg.hi
                          : seg.lo + (seg.hi - seg.lo) * static_cast<double>(i) / (n - 1);
      f[i] = F(t[i]);
    }
    for (index_t i = 0; i + 1 < n; ++i) {
      if (f[i] == 0.0) {
        out.push_back({t[i], t[i], t[i], 0.0});
        continue;
      }
      if (!((f[i] > 0.0 && f[i + 1] < 0.0) || (f[i] < 0.0 && f[i + 1] > 0.0))) continue;
      double a = t[i], b = t[i + 1], fa = f[i], fb = f[i + 1];
      for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (a + b);
        if (b - a <= tol * std::max(1.0, std::fabs(mid)) || mid <= a || mid >= b) break;
        const double fm = F(mid);
        if (fm == 0.0) {
          a = b = mid;
          fa = fb = 0.0;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
          fb = fm;
        }
      }
      // A pole leaves |F| larger at the final bracket than on the grid.
      const double grid_scale = std::max(std::fabs(f[i]), std::fabs(f[i + 1]));
      if (std::min(std::fabs(fa), std::fabs(fb)) > grid_scale) continue;
      const double value = 0.5 * (a + b);
      const double fv = (a == b) ? 0.0 : F(value);
      const double slope = (b > a) ? (fb - fa) / (b - a) : 0.0;
      out.push_back({value, a, b, std::fabs(fv) / std::max(1.0, std::fabs(slope))});
    }
    if (f.back() == 0.0) out.push_back({t.back(), t.back(), t.back(), 0.0});
  }
  return out;
}

namespace {

// Sign-change bisection on [a, b] with F(a) < 0 < F(b) or the reverse.
ScanRoot bisect_root(const Evaluator& F, double a, double b, double fa, double fb, double tol) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (a + b);
    if (b - a <= tol * std::max(1.0, std::fabs(mid)) || mid <= a || mid >= b) break;
    const double fm = F(mid);
    if (fm == 0.0) return {mid, mid, mid, 0.0};
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  const double value = 0.5 * (a + b);
  const double slope = (b > a) ? (fb - fa) / (b - a) : 0.0;
  return {value, a, b, std::fabs(F(value)) / std::max(1.0, std::fabs(slope))};
}

// One grid cell of a function that increases on every branch between simple
// poles. A drop from F(a) to F(b) means a pole; the pole is bisected by
// comparing F(mid) with the end values, then each side holds a root exactly
// when the end value has the sign opposite to the pole's limit there.
void scan_increasing_cell(const Evaluator& F, double a, double b, double fa, double fb,
                          double tol, int depth, std::vector<ScanRoot>& out) {
  if (fb >= fa) {
    if (fa < 0.0 && fb > 0.0) out.push_back(bisect_root(F, a, b, fa, fb, tol));
    if (fa == 0.0) out.push_back({a, a, a, 0.0});
    return;
  }
  double lo = a, hi = b;
  double f_left = fa, f_right = fb;  // F just left / right of the pole bracket
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = F(mid);
    if (fm >= fa) {
      lo = mid;
      f_left = fm;
    } else if (fm <= fb) {
      hi = mid;
      f_right = fm;
    } else {
      // more than one pole in the cell
      if (depth < 40) {
        scan_increasing_cell(F, a, mid, fa, fm, tol, depth + 1, out);
        scan_increasing_cell(F, mid, b, fm, fb, tol, depth + 1, out);
      }
      return;
    }
  }
  if (fa < 0.0 && f_left > 0.0) out.push_back(bisect_root(F, a, lo, fa, f_left, tol));
  if (fa == 0.0) out.push_back({a, a, a, 0.0});
  if (fb > 0.0 && f_right < 0.0) out.push_back(bisect_root(F, hi, b, f_right, fb, tol));
}

}  // namespace

Spectrum solve_schweber_spectrum(const ModelParams& params, double zeta_lo, double zeta_hi,
                                 index_t samples_per_unit, double tol) {
  require(samples_per_unit >= 2, "at least two samples per unit are required");
  const Evaluator F = [&](double z) { return F_schweber(params, z); };
  Spectrum spec;
  spec.params = params;
  spec.source = SpectrumSource::Schweber;
  spec.tol = tol;
  std::vector<ScanRoot> roots;
  for (const SegmentScan& seg : integer_segments(zeta_lo, zeta_hi)) {
    const index_t n = std::max<index_t>(
        2, static_cast<index_t>(std::ceil((seg.hi - seg.lo) * samples_per_unit)) + 1);
    std::vector<double> t(n), f(n);
    for (index_t i = 0; i < n; ++i) {
      t[i] = (i + 1 == n) ? seg.hi
                          : seg.lo + (seg.hi - seg.lo) * static_cast<double>(i) / (n - 1);
      f[i] = F(t[i]);
    }
    for (index_t i = 0; i + 1 < n; ++i) scan_increasing_cell(F, t[i], t[i + 1], f[i], f[i + 1], tol, 0, roots);
    if (f.back() == 0.0) roots.push_back({t.back(), t.back(), t.back(), 0.0});
  }
  for (index_t k = 0; k < roots.size(); ++k) {
    EnergyLevel level;
    level.k = k;
    level.value = EnergyValue::from(roots[k].value, EnergyRep::Zeta, params);
    level.bracket_lo = roots[k].lo;
    level.bracket_hi = roots[k].hi;
    level.residual = roots[k].residual;
    level.stable = true;
    spec.levels.push_back(level);
  }
  return spec;
}

// ---------------------------------------------------------------------------

WavefunctionCoeffs wavefunction(const ModelParams& params, Parity parity, const EnergyValue& eigen,
                                index_t N, WaveMethod method) {
  require(N >= 1, "wavefunction order must be at least 1");
  const double x = eigen.x(params);
  const double kappa = params.kappa();
  const double turning = kappa * x + params.delta();
  const index_t settle = turning > 0.0 ? static_cast<index_t>(std::ceil(turning)) + 1 : 1;

  WavefunctionCoeffs out;
  out.method = method;
  out.phi.resize(N + 1);

  if (method == WaveMethod::Forward) {
    const MonicRecurrence rec = MonicRecurrence::rabi(params, parity, -1);
    const index_t onset = settle + 8 + static_cast<index_t>(std::ceil(4.0 * kappa * kappa));
    ScaledPair pair;
    ScaledValue factorial(1.0);
    out.phi[0] = ScaledValue(1.0);
    for (index_t n = 1; n <= N; ++n) {
      const MonicCoeffs co = rec(n);
      const double next = (x - co.c) * pair.curr - co.lambda * pair.prev;
      pair.prev = pair.curr;
      pair.curr = next;
      pair.rescale();
      factorial *= ScaledValue(static_cast<double>(n));
      out.phi[n] = pair.curr_value() / factorial;
      if (n >= onset && !out.phi[n - 1].is_zero()) {
        const double ratio = (out.phi[n] / out.phi[n - 1]).to_double();
        const double expected = 1.0 / (x - c_bar(params, parity, static_cast<long>(n) - 1));
        if (std::fabs(ratio - expected) > 0.5 * std::fabs(expected)) {
          fail(ErrorKind::MethodUnstable,
               "forward coefficients stop decaying at n = " + std::to_string(n) +
                   " (ratio " + std::to_string(ratio) + ", minimal " + std::to_string(expected) +
                   ")");
        }
      }
    }
    return out;
  }

  // Miller: start beyond the turning point with (phi_{M+1}, phi_M) = (0, 1).
  const index_t M = std::max(N + std::max<index_t>(64, N / 2), 2 * settle + 64);
  const RawRecurrence rec = rabi_recurrence(params, parity, x);
  ScaledPair pair;  // prev = phi_{n+1}, curr = phi_n
  pair.prev = 0.0;
  pair.curr = 1.0;
  for (index_t n = M; n >= 1; --n) {
    const RawCoeffs c = rec(n);
    const double below = -(pair.prev + c.a * pair.curr) / c.b;
    pair.prev = pair.curr;
    pair.curr = below;
    pair.rescale();
    if (n - 1 <= N) out.phi[n - 1] = pair.curr_value();
  }
  const ScaledValue phi0 = out.phi[0];
  if (phi0.is_zero()) fail(ErrorKind::MethodUnstable, "backward recursion produced phi_0 = 0");
  for (auto& v : out.phi) v /= phi0;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> detect_baseline_crossings(const KappaRange& range, double delta, index_t l,
                                              double tol) {
  require(l >= 1, "baseline index must be at least 1");
  require(range.lo > 0.0 && range.hi > range.lo, "coupling range must be positive and ordered");
  require(range.samples >= 2, "coupling scan needs at least two samples");
  require(delta >= 0.0, "delta must be non-negative");

  std::vector<double> grid(range.samples);
  for (index_t i = 0; i < range.samples; ++i) {
    grid[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) / (range.samples - 1);
  }
  if (delta == 0.0) return grid;

  auto g = [&](double kappa, Parity p) {
    const ModelParams params(kappa, delta);
    const double x = (static_cast<double>(l) - kappa * kappa) / kappa;
    return F_rabi(params, p, x);
  };
  // Sign-change location of g(., p) inside [a, b]; nullopt if it is a pole.
  auto refine = [&](double a, double b, Parity p) -> std::optional<double> {
    double fa = g(a, p), fb = g(b, p);
    if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;
    const double scale = std::max(std::fabs(fa), std::fabs(fb));
    for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = g(mid, p);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    if (std::min(std::fabs(fa), std::fabs(fb)) > scale) return std::nullopt;
    return 0.5 * (a + b);
  };

  std::vector<double> plus_vals(range.samples);
  for (index_t i = 0; i < range.samples; ++i) plus_vals[i] = g(grid[i], Parity::Plus);

  std::vector<double> out;
  for (index_t i = 0; i + 1 < range.samples; ++i) {
    if ((plus_vals[i] > 0.0) == (plus_vals[i + 1] > 0.0)) continue;
    const auto k_plus = refine(grid[i], grid[i + 1], Parity::Plus);
    if (!k_plus) continue;
    const double lo = i > 0 ? grid[i - 1] : grid[i];
    const double hi = i + 2 < range.samples ? grid[i + 2] : grid[i + 1];
    // The other parity must cross the same baseline at the same coupling.
    std::optional<double> k_minus;
    for (const auto& [a, b] : {std::pair{grid[i], grid[i + 1]}, std::pair{lo, grid[i]},
                               std::pair{grid[i + 1], hi}}) {
      if (!(b > a)) continue;
      k_minus = refine(a, b, Parity::Minus);
      if (k_minus) break;
    }
    if (!k_minus) continue;
    if (std::fabs(*k_plus - *k_minus) > std::max(1e3 * tol, 1e-8)) continue;
    out.push_back(0.5 * (*k_plus + *k_minus));
  }
  return out;
}

}  // namespace rabi
