#include "rabi_cli/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rabi/errors.hpp"

namespace rabi::cli {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "NA") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
          "malformed number '" + std::string(text) + "'");
  return v;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Shared vocabulary

std::string parity_name(const std::optional<Parity>& p) {
  return p ? std::string(to_string(*p)) : std::string();
}

std::optional<Parity> parity_from(const std::string& s) {
  if (s.empty() || s == "both") return std::nullopt;
  const auto p = parse_parity(s);
  require(p.has_value(), "unknown parity '" + s + "'");
  return p;
}

Parity required_parity(const std::string& s) {
  const auto p = parity_from(s);
  require(p.has_value(), "a parity is required here");
  return *p;
}

SpectrumSource source_from(const std::string& s) {
  for (SpectrumSource src : {SpectrumSource::Parity, SpectrumSource::Merged,
                             SpectrumSource::Schweber, SpectrumSource::Braak}) {
    if (to_string(src) == s) return src;
  }
  fail(ErrorKind::InvalidArgument, "unknown spectrum source '" + s + "'");
}

bool is_string_key(const std::string& key) {
  return key == "subcommand" || key == "parity" || key == "format" || key == "out";
}

enum class Kind { Spectrum, Scan, Dho, Stats, Capacity, Compare };

Kind kind_of(const std::string& subcommand) {
  if (subcommand == "spectrum" || subcommand == "braak") return Kind::Spectrum;
  if (subcommand == "scan") return Kind::Scan;
  if (subcommand == "dho") return Kind::Dho;
  if (subcommand == "stats") return Kind::Stats;
  if (subcommand == "capacity") return Kind::Capacity;
  if (subcommand == "compare") return Kind::Compare;
  fail(ErrorKind::InvalidArgument, "unknown subcommand '" + subcommand + "'");
}

double deviation(const std::optional<double>& a, const std::optional<double>& b) {
  return (a && b) ? std::fabs(*a - *b) : kNaN;
}

// ---------------------------------------------------------------------------
// JSON

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

double get_num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }
std::optional<double> get_opt(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}
index_t get_index(const json& j) { return j.get<index_t>(); }

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [key, value] : config_entries(cfg)) {
    if (is_string_key(key)) {
      j[key] = value;
    } else if (value.empty()) {
      j[key] = nullptr;
    } else {
      const double v = parse_number(value);
      if (v >= 0.0 && v == std::floor(v) && v < 9.0e15 && key != "tol" && key != "kappa" &&
          key != "delta" && key != "omega" && key != "budget" && key[0] != 'x' && key[0] != 'z') {
        j[key] = static_cast<index_t>(v);
      } else {
        j[key] = v;
      }
    }
  }
  return j;
}

RunConfig config_from_json(const json& j) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) entries.emplace_back(key, value.get<std::string>());
    else if (value.is_null()) entries.emplace_back(key, "");
    else entries.emplace_back(key, format_number(value.get<double>()));
  }
  return config_from_entries(entries);
}

json params_json(const ModelParams& p) {
  return json{{"kappa", p.kappa()}, {"delta", p.delta()}, {"omega", p.omega()}};
}

ModelParams params_from_json(const json& j) {
  return ModelParams(j.at("kappa").get<double>(), j.at("delta").get<double>(),
                     j.at("omega").get<double>());
}

json spectrum_json(const Spectrum& s) {
  json levels = json::array();
  for (const EnergyLevel& lv : s.levels) {
    levels.push_back(json{
        {"k", lv.k},
        {"parity", lv.parity ? json(to_string(*lv.parity)) : json(nullptr)},
        {"x", num(lv.value.x(s.params))},
        {"epsilon", num(lv.value.epsilon)},
        {"zeta", num(lv.value.zeta(s.params))},
        {"E", num(lv.value.energy(s.params))},
        {"bracket", json::array({num(lv.bracket_lo), num(lv.bracket_hi)})},
        {"residual", num(lv.residual)},
        {"n_trunc", lv.n_trunc},
        {"stable", lv.stable},
        {"shift", num(lv.shift)},
        {"pole_adjacent", lv.pole_adjacent},
        {"monotone", lv.monotone},
    });
  }
  return json{
      {"params", params_json(s.params)},
      {"source", to_string(s.source)},
      {"parity", s.parity ? std::string(to_string(*s.parity)) : std::string("both")},
      {"tol", num(s.tol)},
      {"n_trunc", s.n_trunc},
      {"n_trunc_check", s.n_trunc_check},
      {"leading_roots", s.leading_roots},
      {"levels", std::move(levels)},
  };
}

Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  s.params = params_from_json(j.at("params"));
  s.source = source_from(j.at("source").get<std::string>());
  s.parity = parity_from(j.at("parity").get<std::string>());
  s.tol = get_num(j.at("tol"));
  s.n_trunc = get_index(j.at("n_trunc"));
  s.n_trunc_check = get_index(j.at("n_trunc_check"));
  s.leading_roots = get_index(j.at("leading_roots"));
  for (const json& l : j.at("levels")) {
    EnergyLevel lv;
    lv.k = get_index(l.at("k"));
    if (!l.at("parity").is_null()) lv.parity = parity_from(l.at("parity").get<std::string>());
    lv.value.epsilon = get_num(l.at("epsilon"));
    lv.bracket_lo = get_num(l.at("bracket").at(0));
    lv.bracket_hi = get_num(l.at("bracket").at(1));
    lv.residual = get_num(l.at("residual"));
    lv.n_trunc = get_index(l.at("n_trunc"));
    lv.stable = l.at("stable").get<bool>();
    lv.shift = get_num(l.at("shift"));
    lv.pole_adjacent = l.at("pole_adjacent").get<bool>();
    lv.monotone = l.at("monotone").get<bool>();
    s.levels.push_back(lv);
  }
  return s;
}

json scan_json(const ScanSeries& s) {
  json samples = json::array();
  for (index_t i = 0; i < s.t.size(); ++i) samples.push_back(json::array({num(s.t[i]), num(s.F[i])}));
  json poles = json::array();
  for (double p : s.poles) poles.push_back(num(p));
  return json{{"variable", to_string(s.variable)}, {"samples", std::move(samples)},
              {"poles", std::move(poles)}};
}

ScanSeries scan_from_json(const json& j) {
  ScanSeries s;
  s.variable = j.at("variable").get<std::string>() == "x" ? ScanVariable::X : ScanVariable::Zeta;
  for (const json& p : j.at("samples")) {
    s.t.push_back(get_num(p.at(0)));
    s.F.push_back(get_num(p.at(1)));
  }
  for (const json& p : j.at("poles")) s.poles.push_back(get_num(p));
  return s;
}

json dho_json(const DhoTable& t) {
  const ModelParams p(t.kappa, 0.0, t.omega);
  json levels = json::array();
  for (const DhoRow& r : t.rows) {
    const EnergyValue e{r.epsilon};
    levels.push_back(json{{"l", r.l},
                          {"epsilon", num(r.epsilon)},
                          {"x", num(e.x(p))},
                          {"zeta", num(e.zeta(p))},
                          {"E", num(e.energy(p))},
                          {"solved", num(r.solved)},
                          {"abs_error", num(r.abs_error)}});
  }
  return json{{"params", params_json(p)}, {"levels", std::move(levels)}};
}

DhoTable dho_from_json(const json& j) {
  DhoTable t;
  const ModelParams p = params_from_json(j.at("params"));
  t.kappa = p.kappa();
  t.omega = p.omega();
  for (const json& l : j.at("levels")) {
    t.rows.push_back({get_index(l.at("l")), get_num(l.at("epsilon")), get_num(l.at("solved")),
                      get_num(l.at("abs_error"))});
  }
  return t;
}

json stats_json(const std::vector<StatsEntry>& entries) {
  json arr = json::array();
  for (const StatsEntry& e : entries) {
    const SpacingStats& st = e.stats;
    json spacings = json::array();
    for (double s : st.spacings) spacings.push_back(num(s));
    arr.push_back(json{{"parity", to_string(e.parity)},
                       {"count", st.count},
                       {"mean", num(st.mean)},
                       {"min", num(st.min)},
                       {"max", num(st.max)},
                       {"mean_spacing", num(st.mean_spacing)},
                       {"histogram_max", kHistogramMax},
                       {"histogram", st.histogram},
                       {"overflow", st.overflow},
                       {"spacings", std::move(spacings)}});
  }
  return json{{"stats", std::move(arr)}};
}

std::vector<StatsEntry> stats_from_json(const json& j) {
  std::vector<StatsEntry> out;
  for (const json& e : j.at("stats")) {
    StatsEntry entry;
    entry.parity = required_parity(e.at("parity").get<std::string>());
    SpacingStats& st = entry.stats;
    st.count = get_index(e.at("count"));
    st.mean = get_num(e.at("mean"));
    st.min = get_num(e.at("min"));
    st.max = get_num(e.at("max"));
    st.mean_spacing = get_num(e.at("mean_spacing"));
    const json& h = e.at("histogram");
    require(h.size() == kHistogramBins, "histogram has the wrong number of bins");
    for (index_t b = 0; b < kHistogramBins; ++b) st.histogram[b] = get_index(h.at(b));
    st.overflow = get_index(e.at("overflow"));
    for (const json& s : e.at("spacings")) st.spacings.push_back(get_num(s));
    out.push_back(std::move(entry));
  }
  return out;
}

json capacity_json(const std::vector<CapacityEntry>& entries) {
  json arr = json::array();
  for (const CapacityEntry& e : entries) {
    const CapacityReport& r = e.report;
    json failure = nullptr;
    if (r.first_failure) {
      const CapacityFailure& f = *r.first_failure;
      failure = json{{"k", f.k}, {"x", num(f.x)}, {"residual", num(f.residual)},
                     {"shift", num(f.shift)}, {"reason", f.reason}};
    }
    arr.push_back(json{{"parity", to_string(e.parity)},
                       {"levels_computed", r.levels_computed},
                       {"n_ceiling", r.n_ceiling},
                       {"n_trunc", r.n_trunc},
                       {"elapsed_seconds", num(r.elapsed_seconds)},
                       {"first_failure", std::move(failure)}});
  }
  return json{{"capacity", std::move(arr)}};
}

std::vector<CapacityEntry> capacity_from_json(const json& j) {
  std::vector<CapacityEntry> out;
  for (const json& e : j.at("capacity")) {
    CapacityEntry entry;
    entry.parity = required_parity(e.at("parity").get<std::string>());
    CapacityReport& r = entry.report;
    r.levels_computed = get_index(e.at("levels_computed"));
    r.n_ceiling = get_index(e.at("n_ceiling"));
    r.n_trunc = get_index(e.at("n_trunc"));
    r.elapsed_seconds = get_num(e.at("elapsed_seconds"));
    if (const json& f = e.at("first_failure"); !f.is_null()) {
      r.first_failure = CapacityFailure{get_index(f.at("k")), get_num(f.at("x")),
                                        get_num(f.at("residual")), get_num(f.at("shift")),
                                        f.at("reason").get<std::string>()};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

json compare_json(const CompareTable& t) {
  json rows = json::array();
  for (const CompareRow& r : t.rows) {
    rows.push_back(json{{"k", r.k},
                        {"parity", to_string(r.parity)},
                        {"zeta_parity", num(r.zeta_parity)},
                        {"zeta_schweber", opt_num(r.zeta_schweber)},
                        {"zeta_braak", opt_num(r.zeta_braak)},
                        {"dev_parity_schweber", num(deviation(r.zeta_parity, r.zeta_schweber))},
                        {"dev_parity_braak", num(deviation(r.zeta_parity, r.zeta_braak))},
                        {"dev_schweber_braak", num(deviation(r.zeta_schweber, r.zeta_braak))}});
  }
  return json{{"rows", std::move(rows)}};
}

CompareTable compare_from_json(const json& j) {
  CompareTable t;
  for (const json& r : j.at("rows")) {
    t.rows.push_back({get_index(r.at("k")), required_parity(r.at("parity").get<std::string>()),
                      get_num(r.at("zeta_parity")), get_opt(r.at("zeta_schweber")),
                      get_opt(r.at("zeta_braak"))});
  }
  return t;
}

// nlohmann::json prints the shortest round-trip form; doubles here use the
// same 17 significant digits as the CSV output.
void emit(const json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (j.is_object() || j.is_array()) {
    const bool object = j.is_object();
    if (j.empty()) {
      out += object ? "{}" : "[]";
      return;
    }
    out += object ? "{\n" : "[\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      if (object) out += json(it.key()).dump() + ": ";
      emit(*it, depth + 1, out);
    }
    out += "\n" + close + (object ? "}" : "]");
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? format_number(v) : "null";
  } else {
    out += j.dump();
  }
}

std::string serialize_json(const Document& doc) {
  json j = json{{"config", config_json(doc.config)}};
  const json body = std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Spectrum>) return spectrum_json(r);
        else if constexpr (std::is_same_v<T, ScanSeries>) return scan_json(r);
        else if constexpr (std::is_same_v<T, DhoTable>) return dho_json(r);
        else if constexpr (std::is_same_v<T, std::vector<StatsEntry>>) return stats_json(r);
        else if constexpr (std::is_same_v<T, std::vector<CapacityEntry>>) return capacity_json(r);
        else return compare_json(r);
      },
      doc.result);
  for (const auto& [key, value] : body.items()) j[key] = value;
  std::string out;
  emit(j, 0, out);
  return out + "\n";
}

Document parse_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  try {
    Document doc{config_from_json(j.at("config")), Spectrum{}};
    switch (kind_of(doc.config.subcommand)) {
      case Kind::Spectrum: doc.result = spectrum_from_json(j); break;
      case Kind::Scan: doc.result = scan_from_json(j); break;
      case Kind::Dho: doc.result = dho_from_json(j); break;
      case Kind::Stats: doc.result = stats_from_json(j); break;
      case Kind::Capacity: doc.result = capacity_from_json(j); break;
      case Kind::Compare: doc.result = compare_from_json(j); break;
    }
    return doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("unexpected JSON layout: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV: "# config.key=value" and "# key=value" comment lines, then one table.

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string write_table(const RunConfig& cfg, const Table& t) {
  std::string s;
  for (const auto& [k, v] : config_entries(cfg)) s += "# config." + k + "=" + v + "\n";
  for (const auto& [k, v] : t.meta) s += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_field(row[i]);
    s += "\n";
  }
  return s;
}

Table read_table(std::string_view text, RunConfig& cfg) {
  Table t;
  std::vector<std::pair<std::string, std::string>> config;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      require(eq != std::string::npos, "malformed CSV comment line");
      std::string key = line.substr(2, eq - 2);
      std::string value = line.substr(eq + 1);
      if (key.rfind("config.", 0) == 0) config.emplace_back(key.substr(7), std::move(value));
      else t.meta.emplace_back(std::move(key), std::move(value));
    } else if (!have_header) {
      t.header = split_csv(line);
      have_header = true;
    } else {
      auto row = split_csv(line);
      require(row.size() == t.header.size(), "CSV row has the wrong number of fields");
      t.rows.push_back(std::move(row));
    }
  }
  require(have_header, "CSV has no header");
  cfg = config_from_entries(config);
  return t;
}

class RowView {
 public:
  RowView(const Table& t, const std::vector<std::string>& row) : t_(t), row_(row) {}
  const std::string& str(const std::string& col) const {
    for (std::size_t i = 0; i < t_.header.size(); ++i) {
      if (t_.header[i] == col) return row_[i];
    }
    fail(ErrorKind::InvalidArgument, "CSV column '" + col + "' is missing");
  }
  double num(const std::string& col) const { return parse_number(str(col)); }
  std::optional<double> opt(const std::string& col) const {
    const std::string& s = str(col);
    return s.empty() ? std::nullopt : std::optional<double>(parse_number(s));
  }
  index_t index(const std::string& col) const {
    return static_cast<index_t>(std::stoull(str(col)));
  }
  bool flag(const std::string& col) const { return str(col) == "true"; }

 private:
  const Table& t_;
  const std::vector<std::string>& row_;
};

std::string meta_value(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.meta) {
    if (k == key) return v;
  }
  fail(ErrorKind::InvalidArgument, "CSV metadata '" + key + "' is missing");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }
std::string opt_text(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

Table spectrum_table(const Spectrum& s) {
  Table t;
  t.meta = {{"kappa", format_number(s.params.kappa())},
            {"delta", format_number(s.params.delta())},
            {"omega", format_number(s.params.omega())},
            {"source", std::string(to_string(s.source))},
            {"parity", s.parity ? std::string(to_string(*s.parity)) : std::string("both")},
            {"tol", format_number(s.tol)},
            {"n_trunc", std::to_string(s.n_trunc)},
            {"n_trunc_check", std::to_string(s.n_trunc_check)},
            {"leading_roots", std::to_string(s.leading_roots)}};
  t.header = {"k",         "parity",     "x",        "epsilon", "zeta",  "E",
              "bracket_lo", "bracket_hi", "residual", "n_trunc", "stable", "shift",
              "pole_adjacent", "monotone"};
  for (const EnergyLevel& lv : s.levels) {
    t.rows.push_back({std::to_string(lv.k), parity_name(lv.parity),
                      format_number(lv.value.x(s.params)), format_number(lv.value.epsilon),
                      format_number(lv.value.zeta(s.params)),
                      format_number(lv.value.energy(s.params)), format_number(lv.bracket_lo),
                      format_number(lv.bracket_hi), format_number(lv.residual),
                      std::to_string(lv.n_trunc), bool_text(lv.stable), format_number(lv.shift),
                      bool_text(lv.pole_adjacent), bool_text(lv.monotone)});
  }
  return t;
}

Spectrum spectrum_from_table(const Table& t) {
  Spectrum s;
  s.params = ModelParams(parse_number(meta_value(t, "kappa")), parse_number(meta_value(t, "delta")),
                         parse_number(meta_value(t, "omega")));
  s.source = source_from(meta_value(t, "source"));
  s.parity = parity_from(meta_value(t, "parity"));
  s.tol = parse_number(meta_value(t, "tol"));
  s.n_trunc = std::stoull(meta_value(t, "n_trunc"));
  s.n_trunc_check = std::stoull(meta_value(t, "n_trunc_check"));
  s.leading_roots = std::stoull(meta_value(t, "leading_roots"));
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    EnergyLevel lv;
    lv.k = r.index("k");
    lv.parity = parity_from(r.str("parity"));
    lv.value.epsilon = r.num("epsilon");
    lv.bracket_lo = r.num("bracket_lo");
    lv.bracket_hi = r.num("bracket_hi");
    lv.residual = r.num("residual");
    lv.n_trunc = r.index("n_trunc");
    lv.stable = r.flag("stable");
    lv.shift = r.num("shift");
    lv.pole_adjacent = r.flag("pole_adjacent");
    lv.monotone = r.flag("monotone");
    s.levels.push_back(lv);
  }
  return s;
}

Table scan_table(const ScanSeries& s) {
  Table t;
  std::string poles;
  for (std::size_t i = 0; i < s.poles.size(); ++i) poles += (i ? " " : "") + format_number(s.poles[i]);
  t.meta = {{"variable", std::string(to_string(s.variable))}, {"poles", poles}};
  t.header = {"t", "F"};
  for (index_t i = 0; i < s.t.size(); ++i) t.rows.push_back({format_number(s.t[i]), format_number(s.F[i])});
  return t;
}

ScanSeries scan_from_table(const Table& t) {
  ScanSeries s;
  s.variable = meta_value(t, "variable") == "x" ? ScanVariable::X : ScanVariable::Zeta;
  std::istringstream poles(meta_value(t, "poles"));
  for (std::string p; poles >> p;) s.poles.push_back(parse_number(p));
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    s.t.push_back(r.num("t"));
    s.F.push_back(r.num("F"));
  }
  return s;
}

Table dho_table(const DhoTable& d) {
  const ModelParams p(d.kappa, 0.0, d.omega);
  Table t;
  t.meta = {{"kappa", format_number(d.kappa)}, {"omega", format_number(d.omega)}};
  t.header = {"l", "epsilon", "x", "zeta", "E", "solved", "abs_error"};
  for (const DhoRow& r : d.rows) {
    const EnergyValue e{r.epsilon};
    t.rows.push_back({std::to_string(r.l), format_number(r.epsilon), format_number(e.x(p)),
                      format_number(e.zeta(p)), format_number(e.energy(p)),
                      format_number(r.solved), format_number(r.abs_error)});
  }
  return t;
}

DhoTable dho_from_table(const Table& t) {
  DhoTable d;
  d.kappa = parse_number(meta_value(t, "kappa"));
  d.omega = parse_number(meta_value(t, "omega"));
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    d.rows.push_back({r.index("l"), r.num("epsilon"), r.num("solved"), r.num("abs_error")});
  }
  return d;
}

// Histogram, mean, min and max are recomputed from the spacings on parse.
Table stats_table(const std::vector<StatsEntry>& entries) {
  Table t;
  t.header = {"parity", "k", "s"};
  for (const StatsEntry& e : entries) {
    const std::string p(to_string(e.parity));
    t.meta.emplace_back(p + ".mean_spacing", format_number(e.stats.mean_spacing));
    t.meta.emplace_back(p + ".mean", format_number(e.stats.mean));
    t.meta.emplace_back(p + ".min", format_number(e.stats.min));
    t.meta.emplace_back(p + ".max", format_number(e.stats.max));
    std::string hist;
    for (index_t b = 0; b < kHistogramBins; ++b) hist += (b ? " " : "") + std::to_string(e.stats.histogram[b]);
    t.meta.emplace_back(p + ".histogram", hist);
    t.meta.emplace_back(p + ".overflow", std::to_string(e.stats.overflow));
    for (index_t k = 0; k < e.stats.spacings.size(); ++k) {
      t.rows.push_back({p, std::to_string(k), format_number(e.stats.spacings[k])});
    }
  }
  return t;
}

std::vector<StatsEntry> stats_from_table(const Table& t) {
  std::vector<StatsEntry> out;
  std::map<std::string, std::vector<double>> spacings;
  std::vector<std::string> order;
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    const std::string& p = r.str("parity");
    if (!spacings.count(p)) order.push_back(p);
    spacings[p].push_back(r.num("s"));
  }
  for (const std::string& p : order) {
    out.push_back({required_parity(p),
                   summarize_spacings(spacings[p], parse_number(meta_value(t, p + ".mean_spacing")))});
  }
  return out;
}

Table capacity_table(const std::vector<CapacityEntry>& entries) {
  Table t;
  t.header = {"parity",       "levels_computed", "n_ceiling",        "n_trunc",
              "elapsed_seconds", "failure_k",    "failure_x",        "failure_residual",
              "failure_shift", "failure_reason"};
  for (const CapacityEntry& e : entries) {
    const CapacityReport& r = e.report;
    std::vector<std::string> row{std::string(to_string(e.parity)), std::to_string(r.levels_computed),
                                 std::to_string(r.n_ceiling), std::to_string(r.n_trunc),
                                 format_number(r.elapsed_seconds)};
    if (r.first_failure) {
      const CapacityFailure& f = *r.first_failure;
      row.insert(row.end(), {std::to_string(f.k), format_number(f.x), format_number(f.residual),
                             format_number(f.shift), f.reason});
    } else {
      row.insert(row.end(), {"", "", "", "", ""});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<CapacityEntry> capacity_from_table(const Table& t) {
  std::vector<CapacityEntry> out;
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    CapacityEntry e;
    e.parity = required_parity(r.str("parity"));
    e.report.levels_computed = r.index("levels_computed");
    e.report.n_ceiling = r.index("n_ceiling");
    e.report.n_trunc = r.index("n_trunc");
    e.report.elapsed_seconds = r.num("elapsed_seconds");
    if (!r.str("failure_k").empty()) {
      e.report.first_failure = CapacityFailure{r.index("failure_k"), r.num("failure_x"),
                                               r.num("failure_residual"), r.num("failure_shift"),
                                               r.str("failure_reason")};
    }
    out.push_back(std::move(e));
  }
  return out;
}

Table compare_table(const CompareTable& c) {
  Table t;
  t.header = {"k", "parity", "zeta_parity", "zeta_schweber", "zeta_braak",
              "dev_parity_schweber", "dev_parity_braak", "dev_schweber_braak"};
  for (const CompareRow& r : c.rows) {
    t.rows.push_back({std::to_string(r.k), std::string(to_string(r.parity)),
                      format_number(r.zeta_parity), opt_text(r.zeta_schweber),
                      opt_text(r.zeta_braak),
                      format_number(deviation(r.zeta_parity, r.zeta_schweber)),
                      format_number(deviation(r.zeta_parity, r.zeta_braak)),
                      format_number(deviation(r.zeta_schweber, r.zeta_braak))});
  }
  return t;
}

CompareTable compare_from_table(const Table& t) {
  CompareTable c;
  for (const auto& row : t.rows) {
    const RowView r(t, row);
    c.rows.push_back({r.index("k"), required_parity(r.str("parity")), r.num("zeta_parity"),
                      r.opt("zeta_schweber"), r.opt("zeta_braak")});
  }
  return c;
}

std::string serialize_csv(const Document& doc) {
  const Table t = std::visit(
      [](const auto& r) -> Table {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Spectrum>) return spectrum_table(r);
        else if constexpr (std::is_same_v<T, ScanSeries>) return scan_table(r);
        else if constexpr (std::is_same_v<T, DhoTable>) return dho_table(r);
        else if constexpr (std::is_same_v<T, std::vector<StatsEntry>>) return stats_table(r);
        else if constexpr (std::is_same_v<T, std::vector<CapacityEntry>>) return capacity_table(r);
        else return compare_table(r);
      },
      doc.result);
  return write_table(doc.config, t);
}

Document parse_csv(std::string_view text) {
  Document doc;
  const Table t = read_table(text, doc.config);
  try {
    switch (kind_of(doc.config.subcommand)) {
      case Kind::Spectrum: doc.result = spectrum_from_table(t); break;
      case Kind::Scan: doc.result = scan_from_table(t); break;
      case Kind::Dho: doc.result = dho_from_table(t); break;
      case Kind::Stats: doc.result = stats_from_table(t); break;
      case Kind::Capacity: doc.result = capacity_from_table(t); break;
      case Kind::Compare: doc.result = compare_from_table(t); break;
    }
  } catch (const std::logic_error& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed CSV field: ") + e.what());
  }
  return doc;
}

}  // namespace

std::string serialize(const Document& doc) {
  return doc.config.format == Format::Json ? serialize_json(doc) : serialize_csv(doc);
}

Document parse(std::string_view text, Format format) {
  return format == Format::Json ? parse_json(text) : parse_csv(text);
}

}  // namespace rabi::cli
