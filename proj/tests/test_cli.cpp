#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(EWLS_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), got);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / "ewls_cli_test";
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("gen is deterministic per seed") {
  Run a = run("gen --seed 7 --n 5 --regime tight");
  Run b = run("gen --seed 7 --n 5 --regime tight");
  Run c = run("gen --seed 8 --n 5 --regime tight");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(json::parse(a.out)["commodities"].size() == 5);
}

TEST_CASE("solve then eval round trip") {
  fs::path dir = scratch();
  for (const std::string algo : {"two-approx", "sub2", "ptas"}) {
    CAPTURE(algo);
    std::string n = algo == "ptas" ? "2" : "6";
    REQUIRE(run("gen --seed 3 --n " + n + " --regime tight --out " + (dir / "inst.json").string()).code == 0);
    Run s = run("solve " + (dir / "inst.json").string() + " --algo " + algo);
    REQUIRE(s.code == 0);
    json j = json::parse(s.out);
    write(dir / "pol.json", j["policy"].dump());
    Run e = run("eval " + (dir / "inst.json").string() + " " + (dir / "pol.json").string());
    CHECK(e.code == 0);
    json r = json::parse(e.out);
    CHECK(r["total_cost_rate"].get<double>() == doctest::Approx(j["report"]["total_cost_rate"].get<double>()));
  }
}

TEST_CASE("infeasible policy exits 1, bad input exits 2") {
  fs::path dir = scratch();
  write(dir / "small.json", R"({"capacity":0.5,"commodities":[{"id":0,"K":1,"H":1,"gamma":1}]})");
  write(dir / "big.json", R"({"tau":1.0,"schedules":{"0":[[0.0,1.0]]}})");
  CHECK(run("eval " + (dir / "small.json").string() + " " + (dir / "big.json").string()).code == 1);
  write(dir / "bad.json", R"({"capacity":1,"commodities":[{"id":0,"K":-1,"H":1,"gamma":1}]})");
  CHECK(run("solve " + (dir / "bad.json").string()).code == 2);
  write(dir / "garbage.json", "{not json");
  CHECK(run("solve " + (dir / "garbage.json").string()).code == 2);
  CHECK(run("solve /nonexistent/file.json").code == 2);
}

TEST_CASE("couple and relax") {
  Run c = run("couple --k 2");
  REQUIRE(c.code == 0);
  json j = json::parse(c.out);
  CHECK(j["case"] == 3);
  CHECK(j["claimed_vmax_ratio"]["exact"] == "27/16");
  CHECK(j["measured_vmax_ratio"].get<double>() == doctest::Approx(27.0 / 16.0));

  fs::path dir = scratch();
  write(dir / "sym.json",
        R"({"capacity":0.5,"commodities":[{"id":0,"K":1,"H":1,"gamma":1},{"id":1,"K":1,"H":1,"gamma":1}]})");
  Run r = run("relax " + (dir / "sym.json").string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["lambda"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("compare emits one row per algorithm and seed") {
  fs::path dir = scratch();
  REQUIRE(run("gen --seed 2 --n 6 --regime loose --out " + (dir / "c.json").string()).code == 0);
  Run r = run("compare " + (dir / "c.json").string() + " --algo two-approx,sub2 --trials 3 --csv " +
              (dir / "c.csv").string());
  REQUIRE(r.code == 0);
  json rows = json::parse(r.out);
  CHECK(rows.size() == 4);  // two-approx once, sub2 per seed
  std::ifstream csv(dir / "c.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("algo,seed", 0) == 0);
}
