#include "rabi_cli/config.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/errors.hpp"
#include "rabi_cli/serialize.hpp"

namespace rabi::cli {

std::string_view to_string(Format f) noexcept { return f == Format::Json ? "json" : "csv"; }

std::string_view to_string(ParitySelector p) noexcept {
  switch (p) {
    case ParitySelector::Plus: return "plus";
    case ParitySelector::Minus: return "minus";
    case ParitySelector::Both: return "both";
  }
  return "both";
}

std::vector<Parity> RunConfig::parities() const {
  switch (parity) {
    case ParitySelector::Plus: return {Parity::Plus};
    case ParitySelector::Minus: return {Parity::Minus};
    case ParitySelector::Both: break;
  }
  return {Parity::Plus, Parity::Minus};
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_number(s);
}

index_t parse_index(const std::string& s) {
  const double v = parse_number(s);
  require(v >= 0.0 && v == std::floor(v), "expected a non-negative integer, got '" + s + "'");
  return static_cast<index_t>(v);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  return {
      {"subcommand", cfg.subcommand},
      {"kappa", format_number(cfg.kappa)},
      {"delta", format_number(cfg.delta)},
      {"omega", format_number(cfg.omega)},
      {"parity", std::string(to_string(cfg.parity))},
      {"levels", std::to_string(cfg.levels)},
      {"trunc", std::to_string(cfg.trunc)},
      {"tol", format_number(cfg.tol)},
      {"xmin", opt_number(cfg.xmin)},
      {"xmax", opt_number(cfg.xmax)},
      {"zmin", opt_number(cfg.zmin)},
      {"zmax", opt_number(cfg.zmax)},
      {"samples", std::to_string(cfg.samples)},
      {"format", std::string(to_string(cfg.format))},
      {"out", cfg.out},
      {"workers", std::to_string(cfg.workers)},
      {"ceiling", std::to_string(cfg.ceiling)},
      {"budget", format_number(cfg.budget)},
  };
}

RunConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& entries) {
  RunConfig cfg;
  for (const auto& [key, value] : entries) {
    if (key == "subcommand") cfg.subcommand = value;
    else if (key == "kappa") cfg.kappa = parse_number(value);
    else if (key == "delta") cfg.delta = parse_number(value);
    else if (key == "omega") cfg.omega = parse_number(value);
    else if (key == "parity") {
      if (value == "plus") cfg.parity = ParitySelector::Plus;
      else if (value == "minus") cfg.parity = ParitySelector::Minus;
      else if (value == "both") cfg.parity = ParitySelector::Both;
      else fail(ErrorKind::InvalidArgument, "unknown parity '" + value + "'");
    } else if (key == "levels") cfg.levels = parse_index(value);
    else if (key == "trunc") cfg.trunc = parse_index(value);
    else if (key == "tol") cfg.tol = parse_number(value);
    else if (key == "xmin") cfg.xmin = parse_opt(value);
    else if (key == "xmax") cfg.xmax = parse_opt(value);
    else if (key == "zmin") cfg.zmin = parse_opt(value);
    else if (key == "zmax") cfg.zmax = parse_opt(value);
    else if (key == "samples") cfg.samples = parse_index(value);
    else if (key == "format") {
      if (value == "json") cfg.format = Format::Json;
      else if (value == "csv") cfg.format = Format::Csv;
      else fail(ErrorKind::InvalidArgument, "unknown format '" + value + "'");
    } else if (key == "out") cfg.out = value;
    else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_index(value));
    else if (key == "ceiling") cfg.ceiling = parse_index(value);
    else if (key == "budget") cfg.budget = parse_number(value);
    else fail(ErrorKind::InvalidArgument, "unknown configuration key '" + key + "'");
  }
  return cfg;
}

void validate(const RunConfig& cfg) {
  const auto known = std::find(std::begin(kSubcommands), std::end(kSubcommands), cfg.subcommand);
  require(known != std::end(kSubcommands), "unknown subcommand '" + cfg.subcommand + "'");
  (void)cfg.params();  // kappa > 0, delta >= 0, omega > 0
  require(cfg.levels >= 1, "--levels must be at least 1");
  require(cfg.trunc >= 1, "--trunc must be at least 1");
  require(std::isfinite(cfg.tol) && cfg.tol > 0.0, "--tol must be positive");
  require(cfg.samples >= 2, "--samples must be at least 2");
  auto check_range = [](const std::optional<double>& lo, const std::optional<double>& hi,
                        const char* name) {
    if (lo) require(std::isfinite(*lo), std::string("--") + name + "min must be finite");
    if (hi) require(std::isfinite(*hi), std::string("--") + name + "max must be finite");
    if (lo && hi) require(*lo < *hi, std::string("--") + name + "min must be below --" + name + "max");
  };
  check_range(cfg.xmin, cfg.xmax, "x");
  check_range(cfg.zmin, cfg.zmax, "z");
  if (cfg.subcommand == "scan") {
    const bool zeta = cfg.zmin || cfg.zmax;
    require(!(zeta && (cfg.xmin || cfg.xmax)), "scan takes either an x range or a zeta range");
    require(zeta || cfg.parity != ParitySelector::Both,
            "an x scan needs --parity plus or minus; give --zmin/--zmax for the zeta form");
  }
  if (cfg.subcommand == "stats") require(cfg.levels >= 3, "stats needs --levels of at least 3");
  if (cfg.subcommand == "capacity") {
    require(cfg.ceiling >= 100, "--ceiling must be at least 100");
    require(std::isfinite(cfg.budget) && cfg.budget >= 0.0, "--budget must be non-negative");
  }
}

}  // namespace rabi::cli
