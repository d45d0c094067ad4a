#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

// NPZDYN_BIN is injected by the build: absolute path of the CLI under test.

namespace {

using nlohmann::json;

struct RunResult {
  int code{-1};
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run(const std::string& args) {
  const std::string cmd =
      std::string(NPZDYN_BIN) + " " + args + " > cli_stdout.tmp 2> cli_stderr.tmp";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  RunResult r;
  r.code = WEXITSTATUS(rc);
  r.out = slurp("cli_stdout.tmp");
  r.err = slurp("cli_stderr.tmp");
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

constexpr const char* kCoexist = "-a 0.25 -b 0.5 -c 1.0 -d 0.75";

}  // namespace

TEST_CASE("validate: admissible parameters report the regime and exit 0") {
  const auto r = run(std::string("validate ") + kCoexist);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("report").at("valid") == true);
  CHECK(j.at("regime").at("class") == "Generic-Interior");
  CHECK(j.at("params").at("d") == 0.75);
}

TEST_CASE("validate: out-of-box parameters exit 1 with the violations listed") {
  const auto r = run("validate -a 1.5 -b 0.5 -c 0.2 -d 0.1");
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j.at("report").at("valid") == false);
  CHECK(j.at("report").at("violations").size() >= 1);
  CHECK_FALSE(j.contains("regime"));
}

TEST_CASE("validate: missing parameters are a usage error (exit 2)") {
  const auto r = run("validate -a 0.25 -b 0.5 -c 1.0");
  CHECK(r.code == 2);
  CHECK(r.err.find("missing required parameter(s)") != std::string::npos);
  CHECK(r.err.find("d") != std::string::npos);
}

TEST_CASE("malformed invocations exit 2, help exits 0") {
  CHECK(run("decompose -a 0.1 -b 0.1 -c 0.1 -d 0.1").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("validate -a notanumber -b 0.5 -c 1.0 -d 0.75").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("fixed-points: JSON report with all equilibria") {
  const auto r = run(std::string("fixed-points ") + kCoexist);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.at("fixed_points").size() == 3);
  CHECK(j.at("fixed_points")[0].at("name") == "extinction");
  CHECK(j.at("fixed_points")[2].at("name") == "coexistence");
  CHECK(j.at("fixed_points")[2].at("stability") == "attracting");
  CHECK(j.at("fixed_points")[2].contains("eigenvalues"));
}

TEST_CASE("fixed-points: report commands refuse --format csv") {
  CHECK(run(std::string("fixed-points --format csv ") + kCoexist).code == 2);
  CHECK(run(std::string("validate --format csv ") + kCoexist).code == 2);
  CHECK(run(std::string("verify --format csv --grid 3 ") + kCoexist).code == 2);
}

TEST_CASE("fixed-points: inadmissible parameters exit 2") {
  CHECK(run("fixed-points -a 1.5 -b 0.5 -c 0.2 -d 0.1").code == 2);
}

TEST_CASE("strong uptake: dynamics commands run outside the stochastic box") {
  // c = 4/3 > 1+a, yet the map keeps the simplex invariant; validate flags
  // the representation bound while iterate/fixed-points still work
  const std::string spiral =
      "-a 0.16666666666666666 -b 0.3333333333333333 "
      "-c 1.3333333333333333 -d 0.6666666666666666";

  const auto v = run("validate " + spiral);
  CHECK(v.code == 1);
  CHECK(json::parse(v.out).at("report").at("valid") == false);

  const auto it = run("iterate " + spiral + " --x0 0.26 --y0 0.48");
  CHECK(it.code == 0);
  const auto last = split(lines_of(it.out).back(), ',');
  REQUIRE(last.size() == 4);
  CHECK(last[0] == "100");
  CHECK(std::abs(std::stod(last[1]) - 0.25) <= 1e-4);
  CHECK(std::abs(std::stod(last[2]) - 0.5) <= 1e-4);

  const auto fp = run("fixed-points " + spiral);
  CHECK(fp.code == 0);
  bool found = false;
  const json fpj = json::parse(fp.out);
  for (const auto& rec : fpj.at("fixed_points")) {
    if (rec.at("name") != "coexistence") continue;
    found = true;
    CHECK(rec.at("stability") == "attracting");
    CHECK(std::abs(rec.at("point")[0].get<double>() - 0.25) <= 1e-12);
    CHECK(std::abs(rec.at("point")[1].get<double>() - 0.5) <= 1e-12);
    // complex pair, |mu| = sqrt(1/2)
    CHECK(rec.at("eigenvalues")[0][1].get<double>() != 0.0);
  }
  CHECK(found);

  // beyond even the invariance bound the dynamics commands refuse to run
  CHECK(run("iterate -a 0 -b 0 -c 1.5 -d 0 --x0 0.2 --y0 0.3").code == 2);
}

TEST_CASE("iterate: default CSV trajectory") {
  const auto r = run(std::string("iterate ") + kCoexist + " --x0 0.1 --y0 0.6");
  CHECK(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 102);  // header + states 0..100
  CHECK(lines[0] == "n,x,y,z");
  const auto last = split(lines.back(), ',');
  REQUIRE(last.size() == 4);
  CHECK(last[0] == "100");
  CHECK(std::abs(std::stod(last[1]) - 0.0476346) <= 1e-4);
  CHECK(std::abs(std::stod(last[2]) - 0.666636) <= 1e-4);
}

TEST_CASE("iterate: n = 0 emits just the initial state") {
  const auto r = run(std::string("iterate ") + kCoexist + " --x0 0.1 --y0 0.6 --n 0");
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).size() == 2);
}

TEST_CASE("iterate: JSON format carries params and all points") {
  const auto r = run(std::string("iterate ") + kCoexist + " --x0 0.1 --y0 0.6 --format json");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("params").at("a") == 0.25);
  REQUIRE(j.at("points").size() == 101);
  CHECK(j.at("points")[0][0] == 0.1);
  CHECK(j.at("points")[0][1] == 0.6);
}

TEST_CASE("iterate: byte-identical across runs") {
  const std::string args = std::string("iterate ") + kCoexist + " --x0 0.1 --y0 0.6";
  const auto first = run(args);
  const auto second = run(args);
  CHECK(first.out == second.out);
  const std::string vargs = std::string("verify --grid 4 ") + kCoexist;
  CHECK(run(vargs).out == run(vargs).out);
}

TEST_CASE("iterate: missing or inconsistent initial point exits 2") {
  CHECK(run(std::string("iterate ") + kCoexist).code == 2);
  CHECK(run(std::string("iterate ") + kCoexist + " --x0 0.9 --y0 0.5").code == 2);
}

TEST_CASE("config file: fills gaps, command line wins") {
  {
    std::ofstream cfg("cli_test.cfg");
    cfg << "a=0.25\nb=0.5\nc=1.0\nd=0.75\nx0=0.1\ny0=0.6\nn=50\n";
  }
  const auto base = run("iterate --config cli_test.cfg");
  CHECK(base.code == 0);
  CHECK(lines_of(base.out).size() == 52);

  const auto overridden = run("iterate --config cli_test.cfg --n 10");
  CHECK(overridden.code == 0);
  CHECK(lines_of(overridden.out).size() == 12);

  const auto reparam = run("iterate --config cli_test.cfg -d 0.6 --n 5");
  CHECK(reparam.code == 0);
  CHECK(lines_of(reparam.out).size() == 7);

  std::remove("cli_test.cfg");
}

TEST_CASE("config file: unknown keys and bad values exit 2") {
  {
    std::ofstream cfg("cli_bad.cfg");
    cfg << "a=0.25\nturbo=yes\n";
  }
  CHECK(run("iterate --config cli_bad.cfg --x0 0.1 --y0 0.6").code == 2);
  {
    std::ofstream cfg("cli_bad.cfg");
    cfg << "a=0.25\nb=0.5\nc=1.0\nd=0.75\nn=five\n";
  }
  CHECK(run("iterate --config cli_bad.cfg --x0 0.1 --y0 0.6").code == 2);
  std::remove("cli_bad.cfg");
  CHECK(run("iterate --config no_such_file.cfg --x0 0.1 --y0 0.6").code == 2);
}

TEST_CASE("verify: clean sweep exits 0 with a full pass rate") {
  const auto r = run(std::string("verify --grid 5 ") + kCoexist);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("points") == 21);
  CHECK(j.at("passed") == 21);
  CHECK(j.at("converged") == 21);
  CHECK(j.at("pass_rate") == 1.0);
  CHECK(j.at("regime").at("class") == "Generic-Interior");
  CHECK(j.at("basins").at("coexistence") >= 1);
  CHECK(j.at("records").size() == 21);
}

TEST_CASE("verify: a failing closed form is reported and exits 1") {
  // b = 0 with weak uptake: interior orbits keep zooplankton mass, the
  // blanket extinction prediction fails there, and the tool says so.
  const auto r = run("verify --grid 3 -a 0.8 -b 0.0 -c 0.2 -d 0.1");
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j.at("points") == 10);
  CHECK(j.at("passed") < 10);
  CHECK(j.at("passed") > 0);  // the fixed edge points still pass
  CHECK(j.at("pass_rate") < 1.0);
  CHECK(j.at("converged") == 10);  // failure of prediction, not of convergence
}

TEST_CASE("verify: classification boundaries pass as honestly unpredicted") {
  const auto r = run("verify --grid 3 -a 0.3 -b 0.5 -c 0.3 -d 0.1");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("pass_rate") == 1.0);
  CHECK(j.at("regime").at("class") == "Boundary");
  bool saw_unpredicted = false;
  for (const auto& rec : j.at("records"))
    if (rec.at("prediction").at("kind") == "unpredicted") saw_unpredicted = true;
  CHECK(saw_unpredicted);
}

TEST_CASE("phase-portrait: grid of subsampled trajectories with basins") {
  const auto r = run(std::string("phase-portrait --grid 3 --n 5 ") + kCoexist);
  CHECK(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 61);  // header + 10 trajectories x 6 rows
  CHECK(lines[0] == "traj,x0,y0,n,x,y,z,basin");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    REQUIRE(fields.size() == 8);
    const bool known = fields[7] == "coexistence" || fields[7] == "extinction" ||
                       fields[7] == "phytoplankton_only";
    CHECK(known);
  }
}

TEST_CASE("phase-portrait: JSON variant and stride validation") {
  const auto r = run(std::string("phase-portrait --grid 3 --n 5 --format json ") + kCoexist);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("stride") == 1);
  CHECK(j.at("trajectories").size() == 10);
  CHECK(run(std::string("phase-portrait --grid 3 --n 5 --stride 0 ") + kCoexist).code == 2);
  CHECK(run(std::string("phase-portrait --grid 1 ") + kCoexist).code == 2);
}

TEST_CASE("--out writes the report to a file and keeps stdout quiet") {
  const auto r =
      run(std::string("iterate ") + kCoexist + " --x0 0.1 --y0 0.6 --out cli_traj.tmp");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const auto text = slurp("cli_traj.tmp");
  CHECK(lines_of(text).size() == 102);
  std::remove("cli_traj.tmp");
}
