#include "rabi_cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "rabi/braak.hpp"
#include "rabi/dho.hpp"
#include "rabi/errors.hpp"

namespace rabi::cli {

namespace {

void add_flags(CLI::App& sub, RunConfig& cfg, std::string& parity, std::string& format) {
  sub.add_option("--kappa", cfg.kappa, "coupling g/omega")->required();
  sub.add_option("--delta", cfg.delta, "level splitting mu/omega")->capture_default_str();
  sub.add_option("--omega", cfg.omega, "boson frequency")->capture_default_str();
  sub.add_option("--parity", parity, "plus|minus|both")->capture_default_str();
  sub.add_option("--levels", cfg.levels, "number of levels")->capture_default_str();
  sub.add_option("--trunc", cfg.trunc, "truncation order N")->capture_default_str();
  sub.add_option("--tol", cfg.tol, "root tolerance")->capture_default_str();
  sub.add_option("--xmin", cfg.xmin, "lower x bound");
  sub.add_option("--xmax", cfg.xmax, "upper x bound");
  sub.add_option("--zmin", cfg.zmin, "lower zeta bound");
  sub.add_option("--zmax", cfg.zmax, "upper zeta bound");
  sub.add_option("--samples", cfg.samples, "scan samples")->capture_default_str();
  sub.add_option("--format", format, "json|csv")->capture_default_str();
  sub.add_option("--out", cfg.out, "output path (default standard output)");
  sub.add_option("--workers", cfg.workers, "solver threads, 0 for all cores")->capture_default_str();
  sub.add_option("--ceiling", cfg.ceiling, "capacity: level ceiling")->capture_default_str();
  sub.add_option("--budget", cfg.budget, "capacity: wall-clock budget in seconds")
      ->capture_default_str();
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opts;
  opts.n_trunc = cfg.trunc;
  opts.tol = cfg.tol;
  opts.workers = cfg.workers;
  return opts;
}

Spectrum parity_spectrum(const RunConfig& cfg, const ModelParams& params) {
  const SolverOptions opts = solver_options(cfg);
  if (cfg.parity != ParitySelector::Both) {
    return solve_spectrum(params, cfg.parities().front(), cfg.levels, opts);
  }
  Spectrum merged = merge_spectra(solve_spectrum(params, Parity::Plus, cfg.levels, opts),
                                  solve_spectrum(params, Parity::Minus, cfg.levels, opts));
  if (merged.levels.size() > cfg.levels) merged.levels.resize(cfg.levels);
  return merged;
}

bool selected(const RunConfig& cfg, const std::optional<Parity>& p) {
  if (cfg.parity == ParitySelector::Both || !p) return true;
  return *p == cfg.parities().front();
}

Spectrum run_braak(RunConfig& cfg, const ModelParams& params) {
  // The ground level has epsilon >= -kappa^2 - delta, i.e. zeta >= -delta.
  const double zmin = cfg.zmin.value_or(-params.delta() - 0.5);
  const bool grow = !cfg.zmax;
  double zmax = cfg.zmax.value_or(zmin + static_cast<double>(cfg.levels) + 1.0);
  for (;;) {
    Spectrum s = braak_spectrum(params, zmin, zmax, 256, std::min(cfg.tol, 1e-13));
    std::erase_if(s.levels, [&](const EnergyLevel& lv) { return !selected(cfg, lv.parity); });
    if (!grow || s.levels.size() >= cfg.levels) {
      if (s.levels.size() > cfg.levels) s.levels.resize(cfg.levels);
      for (index_t k = 0; k < s.levels.size(); ++k) s.levels[k].k = k;
      if (cfg.parity != ParitySelector::Both) s.parity = cfg.parities().front();
      cfg.zmin = zmin;
      cfg.zmax = zmax;
      return s;
    }
    zmax = zmin + 2.0 * (zmax - zmin);
  }
}

std::optional<double> nearest(const Spectrum& s, double zeta, const std::optional<Parity>& parity) {
  std::optional<double> best;
  for (const EnergyLevel& lv : s.levels) {
    if (parity && lv.parity && *lv.parity != *parity) continue;
    const double z = lv.value.zeta(s.params);
    if (std::fabs(z - zeta) < 1e-3 && (!best || std::fabs(z - zeta) < std::fabs(*best - zeta))) {
      best = z;
    }
  }
  return best;
}

CompareTable run_compare(RunConfig& cfg, const ModelParams& params) {
  const Spectrum ref = parity_spectrum(cfg, params);
  CompareTable table;
  if (ref.levels.empty()) return table;
  double lo = ref.levels.front().value.zeta(params), hi = lo;
  for (const EnergyLevel& lv : ref.levels) {
    lo = std::min(lo, lv.value.zeta(params));
    hi = std::max(hi, lv.value.zeta(params));
  }
  const double zmin = cfg.zmin.value_or(lo - 0.5);
  const double zmax = cfg.zmax.value_or(hi + 0.5);
  cfg.zmin = zmin;
  cfg.zmax = zmax;
  const double tol = std::min(cfg.tol, 1e-13);
  const Spectrum schweber = solve_schweber_spectrum(params, zmin, zmax, 256, tol);
  const Spectrum braak = braak_spectrum(params, zmin, zmax, 256, tol);
  for (const EnergyLevel& lv : ref.levels) {
    const double z = lv.value.zeta(params);
    table.rows.push_back({lv.k, lv.parity.value_or(Parity::Plus), z,
                          nearest(schweber, z, std::nullopt), nearest(braak, z, lv.parity)});
  }
  return table;
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Quantum Rabi model spectra by continued fractions and orthogonal polynomials",
               "rabi"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string parity = "both";
  std::string format = "json";
  const char* help[] = {
      "eigenvalues from the parity-resolved quantization function",
      "F(x) or F(zeta) on a uniform grid",
      "displaced-oscillator levels, closed form against the solver",
      "spectrum from the zeros of G+ and G-",
      "parity, Schweber and Braak routes side by side",
      "nearest-neighbour spacing statistics",
      "number of levels computable before checks fail",
  };
  for (std::size_t i = 0; i < std::size(kSubcommands); ++i) {
    add_flags(*app.add_subcommand(std::string(kSubcommands[i]), help[i]), cfg, parity, format);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    fail(ErrorKind::InvalidArgument, e.what());
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg = config_from_entries([&] {
    auto entries = config_entries(cfg);
    for (auto& [k, v] : entries) {
      if (k == "parity") v = parity;
      if (k == "format") v = format;
    }
    return entries;
  }());
  validate(cfg);
  return cfg;
}

Document execute(RunConfig cfg) {
  validate(cfg);
  if (cfg.subcommand == "dho") cfg.delta = 0.0;
  const ModelParams params = cfg.params();
  Document doc{cfg, Spectrum{}};

  if (cfg.subcommand == "spectrum") {
    doc.result = parity_spectrum(cfg, params);
  } else if (cfg.subcommand == "scan") {
    if (cfg.zmin || cfg.zmax) {
      cfg.zmin = cfg.zmin.value_or(std::min(-1.0, *cfg.zmax - 1.0));
      cfg.zmax = cfg.zmax.value_or(std::max(2.0, *cfg.zmin + 1.0));
      doc.result = scan_F(params, ScanTarget::schweber(), *cfg.zmin, *cfg.zmax, cfg.samples, cfg.trunc);
    } else {
      cfg.xmin = cfg.xmin.value_or(std::min(-3.0, cfg.xmax.value_or(4.0) - 1.0));
      cfg.xmax = cfg.xmax.value_or(std::max(4.0, *cfg.xmin + 1.0));
      doc.result = scan_F(params, ScanTarget::of(cfg.parities().front()), *cfg.xmin, *cfg.xmax,
                          cfg.samples, cfg.trunc);
    }
  } else if (cfg.subcommand == "dho") {
    const Spectrum s = solve_spectrum(params, Parity::Plus, cfg.levels, solver_options(cfg));
    DhoTable table{params.kappa(), params.omega(), {}};
    for (index_t l = 0; l < s.levels.size(); ++l) {
      const double exact = dho_eigenvalue(l, params.kappa());
      const double solved = s.levels[l].value.epsilon;
      table.rows.push_back({l, exact, solved, std::fabs(solved - exact)});
    }
    doc.result = std::move(table);
  } else if (cfg.subcommand == "braak") {
    doc.result = run_braak(cfg, params);
  } else if (cfg.subcommand == "compare") {
    doc.result = run_compare(cfg, params);
  } else if (cfg.subcommand == "stats") {
    std::vector<StatsEntry> entries;
    for (Parity p : cfg.parities()) {
      entries.push_back({p, spacing_stats(solve_spectrum(params, p, cfg.levels, solver_options(cfg)))});
    }
    doc.result = std::move(entries);
  } else {
    CapacityOptions opts;
    opts.budget_seconds = cfg.budget;
    opts.workers = cfg.workers;
    std::vector<CapacityEntry> entries;
    for (Parity p : cfg.parities()) entries.push_back({p, capacity_probe(params, p, cfg.ceiling, opts)});
    doc.result = std::move(entries);
  }
  doc.config = cfg;
  return doc;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> cfg = parse_args(argc, argv, out);
    if (!cfg) return kExitOk;
    const std::string text = serialize(execute(*cfg));
    if (cfg->out.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg->out, std::ios::binary);
      require(static_cast<bool>(file), "cannot open '" + cfg->out + "' for writing");
      file << text;
      require(static_cast<bool>(file), "failed writing '" + cfg->out + "'");
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "rabi: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    err << "rabi: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace rabi::cli
