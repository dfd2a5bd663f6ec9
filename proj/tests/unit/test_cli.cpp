#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "toric/cli.hpp"

namespace fs = std::filesystem;
using namespace toric::cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run_cmd(RunConfig cfg) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(cfg, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

RunConfig config(Command c, const std::string& data) {
  RunConfig cfg;
  cfg.command = c;
  cfg.input = fixtures::data_file(data);
  return cfg;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "toric_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double number_after(const std::string& text, const std::string& key) {
  const std::regex re(key + ":\\s*([-+0-9.eE]+)");
  std::smatch m;
  REQUIRE(std::regex_search(text, m, re));
  return std::stod(m[1]);
}

}  // namespace

TEST_CASE("validate echoes labels") {
  const auto o = run_cmd(config(Command::Validate, "teardrop3.json"));
  CHECK(o.code == kOk);
  CHECK(o.out.find("proper: yes") != std::string::npos);
  CHECK(o.out.find("rational: yes") != std::string::npos);
  CHECK(o.out.find("simple: yes") != std::string::npos);
  CHECK(o.out.find("label 3") != std::string::npos);
}

TEST_CASE("structure groups of the teardrop") {
  const auto o = run_cmd(config(Command::StructureGroup, "teardrop3.json"));
  CHECK(o.code == kOk);
  CHECK(o.out.find("Z/3") != std::string::npos);
  CHECK(o.out.find("Z/1") != std::string::npos);
}

TEST_CASE("soliton vector json") {
  auto cfg = config(Command::SolitonVector, "half_line.json");
  cfg.output = scratch("sv.json");
  const auto o = run_cmd(cfg);
  REQUIRE(o.code == kOk);
  const auto j = nlohmann::json::parse(slurp(*cfg.output));
  CHECK(j["b"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(j["grad_norm"].get<double>() <= 1e-12);
  CHECK(j["F"].get<double>() == doctest::Approx(2 * std::exp(1.0)));
}

TEST_CASE("solve then residual") {
  auto cfg = config(Command::Solve, "teardrop3.json");
  cfg.output = scratch("td.json");
  auto o = run_cmd(cfg);
  REQUIRE(o.code == kOk);
  CHECK(fs::exists(scratch("td.csv")));
  const std::string csv = slurp(scratch("td.csv"));
  CHECK(csv.rfind("x0,s,residual\n", 0) == 0);

  auto res = config(Command::Residual, "teardrop3.json");
  res.potential = cfg.output;
  o = run_cmd(res);
  REQUIRE(o.code == kOk);
  CHECK(number_after(o.out, "residual deviation") <= 1e-6);

  auto chk = config(Command::CheckPotential, "teardrop3.json");
  chk.potential = cfg.output;
  CHECK(run_cmd(chk).code == kOk);
}

TEST_CASE("artifacts are byte-identical across runs") {
  for (const char* name : {"interval.json", "square.json"}) {
    std::string first_json, first_csv;
    for (int rep = 0; rep < 2; ++rep) {
      auto cfg = config(Command::Solve, name);
      cfg.output = scratch("det" + std::to_string(rep) + ".json");
      REQUIRE(run_cmd(cfg).code == kOk);
      const std::string j = slurp(*cfg.output);
      const std::string c = slurp(scratch("det" + std::to_string(rep) + ".csv"));
      if (rep == 0) {
        first_json = j;
        first_csv = c;
      } else {
        CHECK(j == first_json);
        CHECK(c == first_csv);
      }
    }
  }
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    auto cfg = config(Command::DingScan, "interval.json");
    cfg.seed = 5;
    cfg.output = scratch("scan" + std::to_string(rep) + ".csv");
    REQUIRE(run_cmd(cfg).code == kOk);
    const std::string s = slurp(*cfg.output);
    CHECK(s.rfind("t,D1,D\n", 0) == 0);
    if (rep == 0)
      first = s;
    else
      CHECK(s == first);
  }
}

TEST_CASE("general offsets need the flag") {
  const fs::path p = scratch("general.json");
  write(p, R"({"dim": 1, "facets": [{"normal": [1], "label": 1, "offset": 3}, {"normal": [-1], "label": 1, "offset": 2}]})");
  for (auto c : {Command::Validate, Command::Vertices, Command::StructureGroup, Command::Delzant, Command::Fan,
                 Command::SolitonVector}) {
    RunConfig cfg;
    cfg.command = c;
    cfg.input = p;
    const auto o = run_cmd(cfg);
    CHECK(o.code == kValidationFailure);
    CHECK(o.err.find("allow-general-offsets") != std::string::npos);
    cfg.allow_general_offsets = true;
    CHECK(run_cmd(cfg).code == kOk);
  }
  // With a_i != 2 the equation and the boundary behaviour are incompatible, so
  // the solver reports non-convergence once the flag lets it run.
  RunConfig cfg;
  cfg.command = Command::Solve;
  cfg.input = p;
  CHECK(run_cmd(cfg).code == kValidationFailure);
  cfg.allow_general_offsets = true;
  CHECK(run_cmd(cfg).code == kNoConvergence);
}

TEST_CASE("exit codes") {
  RunConfig cfg;
  cfg.command = Command::Validate;
  cfg.input = scratch("missing.json");
  fs::remove(cfg.input);
  auto o = run_cmd(cfg);
  CHECK(o.code == kIoError);
  CHECK(o.err.rfind("error: ", 0) == 0);
  CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);

  write(scratch("broken.json"), "{ not json");
  cfg.input = scratch("broken.json");
  CHECK(run_cmd(cfg).code == kIoError);

  // Improper polyhedron: validation failure.
  write(scratch("halfplane.json"), R"({"dim": 2, "facets": [{"normal": [1, 0], "label": 1, "offset": 2}]})");
  cfg.input = scratch("halfplane.json");
  CHECK(run_cmd(cfg).code == kValidationFailure);

  // A dented potential is not convex: numerical failure.
  write(scratch("dent.json"),
        R"({"canonical": 1, "terms": [{"type": "bump", "amplitude": -5, "center": [0], "radius": [0.5]}]})");
  auto res = config(Command::Residual, "interval.json");
  res.potential = scratch("dent.json");
  o = run_cmd(res);
  CHECK(o.code == kNoConvergence);
  CHECK(o.err.find("NotConvexHere") != std::string::npos);

  // Doubled boundary term fails the potential checks.
  write(scratch("doubled.json"), R"({"canonical": 1, "terms": [{"type": "facet_log", "facet": 0, "coefficient": 1}]})");
  auto chk = config(Command::CheckPotential, "interval.json");
  chk.potential = scratch("doubled.json");
  CHECK(run_cmd(chk).code == kValidationFailure);
}

TEST_CASE("command names round-trip") {
  for (auto c : {Command::Validate, Command::Vertices, Command::StructureGroup, Command::Delzant, Command::Fan,
                 Command::SolitonVector, Command::Residual, Command::Solve, Command::DingScan,
                 Command::CheckPotential})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_FALSE(parse_command("bogus").has_value());
}

TEST_CASE("executable front end") {
  const std::string exe = TORIC_EXE;
  const std::string quiet = " > " + scratch("exe.out").string() + " 2>&1";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  CHECK(status(std::system((exe + " validate " + fixtures::data_file("interval.json") + quiet).c_str())) == 0);
  CHECK(status(std::system((exe + " validate " + scratch("missing.json").string() + quiet).c_str())) == 4);
  CHECK(status(std::system((exe + " soliton-vector " + fixtures::data_file("quadrant.json") + " --tol 1e-11 --out " +
                            scratch("q.json").string() + quiet)
                               .c_str())) == 0);
  const auto j = nlohmann::json::parse(slurp(scratch("q.json")));
  CHECK(j["b"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
}
