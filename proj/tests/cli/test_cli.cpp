#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "regs/geometry.hpp"
#include "regs/rbffd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = REGS_CLI_WORKDIR;

int run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const std::string cmd = "cd '" + kWork.string() + "' && " + env + " '" REGS_CLI_PATH "' " + args + " 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& name) {
  std::ifstream f(kWork / name, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& name, const std::string& text) { std::ofstream(kWork / name, std::ios::binary) << text; }

json load(const std::string& name) { return json::parse(slurp(name)); }

}  // namespace

TEST_CASE("gen writes a CSV that reads back") {
  REQUIRE(run("gen --fn testfun1d --layout grid --n 2000 --out t1.csv") == 0);
  const regs::Dataset d = regs::read_csv((kWork / "t1.csv").string());
  CHECK(d.points.size() == 2000);
  CHECK(d.points.dim() == 1);
  CHECK(d.points[0][0] == -1.0);
  CHECK(d.points[1999][0] == 1.0);
  CHECK(d.values[0] == 0.8);
}

TEST_CASE("profile reports the estimate and echoes the effective config") {
  REQUIRE(run("gen --fn testfun1d --layout grid --n 2000 --out t1.csv") == 0);
  REQUIRE(run("profile --input t1.csv --z -0.2 --n 20 --eps 1.0 --grid 0.6:3.5:0.025 --out p.json") == 0);
  const json r = load("p.json");
  CHECK(r["kind"] == "profile");
  CHECK(r["config"]["n"] == 20);
  CHECK(r["points"].size() == 1);
  const json& p = r["points"][0];
  CHECK(p["z"][0].get<double>() == -0.2);
  CHECK(p["profile"]["m"].size() == 117);
  for (const char* key : {"case", "s_tilde", "m_star", "q", "n", "method"}) CHECK(p.contains(key));
}

TEST_CASE("flags override the config file, which overrides defaults") {
  REQUIRE(run("gen --fn kink1 --layout grid --n 200 --out k.csv") == 0);
  spit("c.json", R"({"n": 30, "profile": {"eps": 2.0}})");
  REQUIRE(run("profile --input k.csv --z 0 --out a.json") == 0);
  CHECK(load("a.json")["config"]["n"] == 20);
  REQUIRE(run("profile --config c.json --input k.csv --z 0 --out a.json") == 0);
  CHECK(load("a.json")["config"]["n"] == 30);
  CHECK(load("a.json")["config"]["eps"] == 2.0);
  REQUIRE(run("profile --config c.json --input k.csv --z 0 --n 25 --out a.json") == 0);
  CHECK(load("a.json")["config"]["n"] == 25);
  CHECK(load("a.json")["points"][0]["n"] == 25);
}

TEST_CASE("usage errors exit with 1 and name the flag") {
  CHECK(run("profile --input k.csv --z 0 --bogus 3") == 1);
  CHECK(slurp("stderr.txt").find("--bogus") != std::string::npos);
  CHECK(run("map --fn testfun1d --method nope") == 1);
  CHECK(run("profile --fn testfun1d") == 1);
  CHECK(slurp("stderr.txt").find("--z") != std::string::npos);
  spit("bad.json", R"({"nonsense": 1})");
  CHECK(run("profile --config bad.json --fn testfun1d --z 0") == 1);
  CHECK(run("flag --map p.json --order 7") == 1);
  CHECK(run("") == 1);
}

TEST_CASE("data errors exit with 2 and name the file and row") {
  CHECK(run("profile --input missing.csv --z 0") == 2);
  CHECK(slurp("stderr.txt").find("missing.csv") != std::string::npos);
  spit("broken.csv", "x,value\n0,1\n0.5,oops\n1,2\n");
  CHECK(run("profile --input broken.csv --z 0") == 2);
  const std::string err = slurp("stderr.txt");
  CHECK(err.find("broken.csv") != std::string::npos);
  CHECK(err.find('3') != std::string::npos);
  spit("notmap.json", R"({"kind": "profile"})");
  CHECK(run("flag --map notmap.json") == 2);
}

TEST_CASE("map, refine and flag are byte-identical across runs and thread counts") {
  REQUIRE(run("gen --fn testfun1d --layout grid --n 2000 --out t1.csv") == 0);
  const std::string pipeline =
      "map --input t1.csv --method screened --m-max 2.25 --out m.json && '" REGS_CLI_PATH
      "' refine --map m.json --out r.json && '" REGS_CLI_PATH "' flag --map r.json --order 0 --out f.json";
  REQUIRE(run(pipeline, "REGS_THREADS=1") == 0);
  const std::string m1 = slurp("m.json"), r1 = slurp("r.json"), f1 = slurp("f.json");
  REQUIRE(run(pipeline, "REGS_THREADS=3") == 0);
  CHECK(slurp("m.json") == m1);
  CHECK(slurp("r.json") == r1);
  CHECK(slurp("f.json") == f1);
  const json f = load("f.json");
  CHECK(f["kind"] == "flags");
  CHECK(f["orders"][0]["order"] == 0);
  CHECK(f["orders"][0].contains("flagged"));
  const json m = load("m.json");
  CHECK(m["points"].size() == 2000);
  CHECK(m["solves"].get<std::size_t>() <= 2000 + 2 * m["outliers"].size());
}

TEST_CASE("diff skips flagged points and plot emits SVG") {
  REQUIRE(run("gen --fn testfun1d --layout grid --n 2000 --out t1.csv") == 0);
  REQUIRE(run("map --input t1.csv --method screened --m-max 2.25 --out m.json") == 0);
  REQUIRE(run("refine --map m.json --out r.json") == 0);
  REQUIRE(run("flag --map r.json --order 1 --out f.json") == 0);
  REQUIRE(run("diff --input t1.csv --op dx --eps 50 --flags r.json --out dx.csv") == 0);
  const auto field = regs::read_derivative_csv((kWork / "dx.csv").string(), 1);
  CHECK(field.size() == 2000);
  std::size_t skipped = 0;
  for (const auto& p : field) {
    if (p.status == regs::DerivativeStatus::skipped) {
      ++skipped;
      CHECK(std::isnan(p.value));
    }
  }
  CHECK(skipped == load("f.json")["orders"][0]["flagged"].get<std::size_t>());
  REQUIRE(run("plot --in r.json --out r.svg") == 0);
  CHECK(slurp("r.svg").rfind("<svg", 0) == 0);
  REQUIRE(run("plot --in p.json --out p.svg") == 0);
  CHECK(slurp("p.svg").find("polyline") != std::string::npos);
}

TEST_CASE("bandlimit inverse mode checks every instance") {
  REQUIRE(run("bandlimit --mode inverse --instances 10 --out b.json") == 0);
  const json b = load("b.json");
  CHECK(b["instances"] == 10);
  CHECK(b["points"].size() == 10);
  CHECK(b["holds"] == 10);
}
