#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pshcheck/cli.hpp"

using namespace psh;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json report(const Run& r) {
  json j = json::parse(r.out);
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST_CASE("check exit codes") {
  auto v = run({"check", "--check", "bp-psh", "--expr", "abs(z1)^2-abs(z2)^2", "--grid", "origin", "--frames", "all",
                "--budget", "20000"});
  REQUIRE(v.code == cli::kExitViolation);
  const json j = report(v);
  CHECK(j["schema"] == "pshcheck.report/1");
  const auto& w = j["result"]["verdict"]["witnesses"][0];
  CHECK(w["frame"]["label"] == "swap(1,2)");
  CHECK(std::abs(w["margin"].get<double>() + 1.0 / 3.0) < 0.03);

  CHECK(run({"check", "--check", "mean-b", "--catalog", "ball-quadratic", "--budget", "2000"}).code ==
        cli::kExitConsistent);
  CHECK(run({"check", "--check", "harmonic-p", "--expr", "re(z1)", "--budget", "500"}).code == cli::kExitConsistent);
  CHECK(run({"check", "--check", "bp-psh", "--catalog", "log-modulus", "--budget", "100"}).code ==
        cli::kExitInconclusive);
}

TEST_CASE("mean subcommand") {
  const auto r = run({"mean", "--expr", "abs(z1)^2", "--dim", "2", "--radii", "1,0.1", "--budget", "100000"});
  REQUIRE(r.code == 0);
  const auto est = report(r)["result"]["estimates"][0];
  CHECK(std::abs(est["value"].get<double>() - 1.0 / 3.0) < 4.0 * est["std_error"].get<double>());
  const auto c = report(run({"mean", "--expr", "1", "--dim", "2", "--radii", "1,0.1", "--budget", "100"}));
  CHECK(c["result"]["estimates"][0]["value"] == 1.0);
  CHECK(c["result"]["estimates"][0]["std_error"] == 0.0);
}

TEST_CASE("usage and parse errors exit 64 with diagnostics") {
  const auto bad = run({"mean", "--expr", "re(z1*z2"});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("offset 8") != std::string::npos);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"check", "--check", "nope", "--expr", "abs(z1)"}).code == cli::kExitUsage);
  CHECK(run({"check", "--expr", "abs(z1)", "--grid", "cube:3"}).code == cli::kExitUsage);
  CHECK(run({"mean"}).code == cli::kExitUsage);
  CHECK(run({"catalog", "--format", "xml"}).code == cli::kExitUsage);
}

TEST_CASE("runtime errors exit above 2 and below 64") {
  const auto r = run({"laplacian", "--operator", "bp", "--expr", "log(x1)", "--real-dim", "2", "--grid",
                      "points:-1,0", "--budget", "10"});
  CHECK(r.code == cli::kExitError);
  // u = -inf at a grid point is reported, not fatal.
  const auto s = run({"laplacian", "--operator", "bp", "--expr", "log(sqrt(x1^2+x2^2))", "--budget", "10"});
  CHECK(s.code == cli::kExitConsistent);
  CHECK(s.out.find("\"skipped\": true") != std::string::npos);
  CHECK(run({"check", "--check", "subharmonic-p", "--expr", "x1", "--weight", "slice:0,1"}).code ==
        cli::kExitUsage);
}

TEST_CASE("catalog listing and filter") {
  const json all = report(run({"catalog"}));
  CHECK(all["result"]["entries"].size() >= 9);
  bool has_remark = false;
  for (const auto& e : all["result"]["entries"]) has_remark |= e["name"] == "remark-3.4";
  CHECK(has_remark);
  const json psh_only = report(run({"catalog", "--filter", "psh"}));
  for (const auto& e : psh_only["result"]["entries"]) CHECK(e["label"] == "psh");
}

TEST_CASE("reports replay from their embedded config") {
  const std::vector<std::string> args{"check", "--check", "mean-d", "--catalog", "subharmonic-not-psh",
                                      "--grid", "random:3:-1:1", "--frames", "haar:2", "--budget", "1000",
                                      "--seed", "5"};
  const auto first = run(args);
  const auto second = run(args);
  CHECK(report(first) == report(second));

  const auto path = std::filesystem::temp_directory_path() / "pshcheck_replay.json";
  std::ofstream(path) << first.out;
  const auto replay = run({"check", "--config", path.string()});
  CHECK(replay.code == first.code);
  CHECK(report(replay) == report(first));
  std::filesystem::remove(path);
}

TEST_CASE("csv output is a flat per-point table") {
  const auto r = run({"check", "--check", "mean-d", "--expr", "abs(z1)^2", "--dim", "1", "--grid",
                      "points:0;0.5+0.5*i", "--budget", "500", "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,status,center_value,margin,std_error,frame,x1,x2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("default budget comes from the environment") {
  ::setenv("PSH_DEFAULT_BUDGET", "123", 1);
  const json j = report(run({"mean", "--expr", "abs(z1)^2"}));
  CHECK(j["config"]["budget"] == 123);
  CHECK(j["result"]["estimates"][0]["samples"] == 123);
  ::setenv("PSH_DEFAULT_BUDGET", "zero", 1);
  CHECK(run({"mean", "--expr", "abs(z1)^2"}).code == cli::kExitUsage);
  ::unsetenv("PSH_DEFAULT_BUDGET");
  CHECK(report(run({"mean", "--expr", "abs(z1)^2", "--budget", "50"}))["config"]["budget"] == 50);
}

TEST_CASE("grid specs") {
  CHECK(cli::parse_complex_grid("origin", 2, 0).size() == 1);
  const auto pts = cli::parse_complex_grid("points:0.3+0.1*i,1;0,0", 2, 0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == Complex(0.3, 0.1));
  CHECK(cli::parse_real_grid("box:-1:1:3", 2, 0).size() == 9);
  const auto a = cli::parse_real_grid("random:5:0:2", 3, 7);
  CHECK(a.size() == 5);
  CHECK(a == cli::parse_real_grid("random:5:0:2", 3, 7));
  for (const auto& x : a)
    for (double v : x) CHECK((v >= 0.0 && v <= 2.0));
  CHECK_THROWS_AS(cli::parse_real_grid("points:1,2", 3, 0), ConfigError);
}
