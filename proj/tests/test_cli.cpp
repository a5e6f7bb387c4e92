#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi_cli/run.hpp"

using namespace rabi;
using namespace rabi::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rabi");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

RunConfig config_of(std::vector<std::string> args) {
  args.insert(args.begin(), "rabi");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream sink;
  const auto cfg = parse_args(static_cast<int>(argv.size()), argv.data(), sink);
  REQUIRE(cfg.has_value());
  return *cfg;
}

const std::vector<std::vector<std::string>> kRuns = {
    {"spectrum", "--kappa", "0.7", "--delta", "0.4", "--levels", "5"},
    {"spectrum", "--kappa", "1.4", "--delta", "0.4", "--parity", "minus", "--levels", "6"},
    {"scan", "--kappa", "1.4", "--delta", "0.4", "--parity", "plus", "--samples", "200"},
    {"scan", "--kappa", "0.7", "--delta", "0.4", "--zmin", "-1", "--zmax", "2", "--samples", "300"},
    {"dho", "--kappa", "1", "--levels", "10"},
    {"braak", "--kappa", "0.7", "--delta", "0.4", "--levels", "5"},
    {"compare", "--kappa", "0.7", "--delta", "0.4", "--levels", "6"},
    {"stats", "--kappa", "0.7", "--delta", "0.4", "--levels", "40"},
    {"capacity", "--kappa", "1", "--ceiling", "100", "--parity", "plus"},
};

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(parse_number("NA") != parse_number("NA"));
  CHECK(parse_number("0.10000000000000001") == 0.1);
  CHECK_THROWS_AS(parse_number("1.5x"), Error);
  const Outcome o = invoke({"dho", "--kappa", "0.7", "--levels", "2"});
  CHECK(o.out.find("\"kappa\": 0.69999999999999996") != std::string::npos);
}

TEST_CASE("spectrum command reproduces the reference levels") {
  const Outcome o = invoke({"spectrum", "--kappa", "0.7", "--delta", "0.4", "--levels", "5",
                            "--format", "csv"});
  REQUIRE(o.code == kExitOk);
  const Document doc = parse(o.out, Format::Csv);
  const Spectrum& s = std::get<Spectrum>(doc.result);
  const double expected[] = {-0.217805, 0.0629563, 0.86095, 1.1636, 1.85076};
  REQUIRE(s.levels.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(s.levels[k].value.zeta(s.params) == doctest::Approx(expected[k]).epsilon(1e-5));
}

TEST_CASE("dho command lists the closed-form ladder") {
  const Outcome o = invoke({"dho", "--kappa", "1", "--levels", "10"});
  REQUIRE(o.code == kExitOk);
  const DhoTable t = std::get<DhoTable>(parse(o.out, Format::Json).result);
  REQUIRE(t.rows.size() == 10);
  for (index_t l = 0; l < 10; ++l) {
    CHECK(t.rows[l].epsilon == static_cast<double>(l) - 1.0);
    CHECK(t.rows[l].abs_error < 1e-8);
  }
}

TEST_CASE("serialisation round trips") {
  for (const auto& args : kRuns) {
    for (Format f : {Format::Json, Format::Csv}) {
      CAPTURE(args[0]);
      CAPTURE(to_string(f));
      RunConfig cfg = config_of(args);
      cfg.format = f;
      const std::string once = serialize(execute(cfg));
      const Document back = parse(once, f);
      CHECK(back.config.subcommand == args[0]);
      CHECK(serialize(back) == once);
    }
  }
}

TEST_CASE("output does not depend on the worker count") {
  for (const auto& args : kRuns) {
    if (args[0] == "capacity") continue;  // reports wall-clock time
    CAPTURE(args[0]);
    RunConfig one = config_of(args);
    one.workers = 1;
    RunConfig many = one;
    many.workers = 4;
    Document a = execute(one);
    Document b = execute(many);
    b.config.workers = 1;
    CHECK(serialize(a) == serialize(b));
  }
}

TEST_CASE("exit codes") {
  CHECK(invoke({"spectrum", "--kappa", "0"}).code == kExitValidation);
  CHECK(invoke({"spectrum", "--kappa", "-1"}).code == kExitValidation);
  CHECK(invoke({"spectrum"}).code == kExitValidation);
  CHECK(invoke({"nonsense", "--kappa", "1"}).code == kExitValidation);
  CHECK(invoke({"spectrum", "--kappa", "1", "--parity", "sideways"}).code == kExitValidation);
  CHECK(invoke({"scan", "--kappa", "1", "--xmin", "2", "--xmax", "1", "--parity", "plus"}).code ==
        kExitValidation);
  CHECK(invoke({"stats", "--kappa", "1", "--levels", "2"}).code == kExitValidation);
  const Outcome bad = invoke({"spectrum", "--kappa", "0"});
  CHECK(bad.out.empty());
  CHECK(bad.err.find("kappa") != std::string::npos);
  const Outcome numeric = invoke({"braak", "--kappa", "1e200"});
  CHECK(numeric.code == kExitNumerical);
  CHECK(!numeric.err.empty());
  CHECK(invoke({"--help"}).code == kExitOk);
}
