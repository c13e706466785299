#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "polyrecon/io.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

const std::string kCli = POLYRECON_CLI;
const std::string kData = POLYRECON_DATA;

Run run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return "\"" + kData + "/" + name + "\""; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

bool has(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("fan-info") {
  const Run hex = run("fan-info " + data("hexagon.json"));
  CHECK(hex.code == 0);
  for (const char* line : {"h1 + h3 - h2 >= 0", "h2 + h4 - h3 >= 0", "h3 + h5 - h4 >= 0", "h4 + h6 - h5 >= 0",
                           "h1 + h5 - h6 >= 0", "h2 + h6 - h1 >= 0"})
    CHECK(has(hex.out, line));
  CHECK(has(hex.out, "irredundant system (6 inequalities)"));
  CHECK(has(hex.out, "c_delta = "));

  const Run d1 = run("fan-info " + data("delta1.json"));
  CHECK(d1.code == 0);
  CHECK(has(d1.out, "irredundant system (2 inequalities)"));
  CHECK(has(d1.out, "h1 + h2 - h3 - h4 >= 0"));
  CHECK(has(d1.out, "h3 + h4 + 2 h5 >= 0"));

  const Run d2 = run("fan-info " + data("delta2.json"));
  CHECK(has(d2.out, "h3 + h4 - h1 - h2 >= 0"));
  CHECK(has(d2.out, "h1 + h2 + 2 h5 >= 0"));

  put("malformed.json", "{\n  \"dim\": 2,\n  \"rays\": [[1, 0],\n}\n");
  const Run bad = run("fan-info malformed.json");
  CHECK(bad.code == 2);
  CHECK(has(bad.out, "malformed.json:4:1"));

  put("overlap.json", R"({"dim": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]], "cells": [[0, 1], [1, 2], [2, 3]]})");
  const Run invalid = run("fan-info overlap.json");
  CHECK(invalid.code == 3);
  CHECK(has(invalid.out, "[FAIL]"));

  CHECK(run("fan-info does-not-exist.json").code == 2);
}

TEST_CASE("reconstruct") {
  const Run ex = run("reconstruct --fan " + data("hexagon.json") + " --data " + data("hexagon_segment.csv") + " --out segment.json");
  CHECK(ex.code == 0);
  const auto j = nlohmann::json::parse(slurp("segment.json"));
  CHECK(j["format"] == polyrecon::kResultFormat);
  CHECK(j["solution_set"]["dimension"] == 1);
  REQUIRE(j["solution_set"]["segment_endpoints"].size() == 2);
  for (const auto& end : j["solution_set"]["segment_endpoints"]) {
    const double first = end[0].get<double>();
    CHECK((std::abs(first - 4.0 / 3) < 1e-7 || std::abs(first - 2.0 / 3) < 1e-7));
  }
  CHECK(has(ex.out, "segment endpoint"));

  const Run multi = run("reconstruct --fan " + data("delta1.json") + " --fan " + data("delta2.json") + " --data " +
                        data("prisms.csv") + " --out prisms.json");
  CHECK(multi.code == 0);
  CHECK(has(multi.out, "tie between fans 1 2"));
  const auto m = nlohmann::json::parse(slurp("prisms.json"));
  CHECK(m["tie"] == true);
  const double expect[2][5] = {{4, 4, 2, 2, 0}, {2, 2, 4, 4, 0}};
  for (int f = 0; f < 2; ++f)
    for (int i = 0; i < 5; ++i) CHECK(std::abs(m["fans"][f]["result"]["h_hat"][i].get<double>() - expect[f][i]) < 1e-7);

  const Run stdout_json = run("reconstruct --fan " + data("delta1.json") + " --data " + data("prisms.csv"));
  CHECK(stdout_json.code == 0);
  CHECK(has(stdout_json.out, "\"format\": \"polyrecon-result/1\""));

  put("empty.csv", "# nothing here\n");
  CHECK(run("reconstruct --fan " + data("hexagon.json") + " --data empty.csv").code == 2);
  put("short.csv", "1,0,1\n0,1\n");
  const Run row = run("reconstruct --fan " + data("hexagon.json") + " --data short.csv");
  CHECK(row.code == 2);
  CHECK(has(row.out, "short.csv:2:1"));
  CHECK(run("reconstruct --fan " + data("delta1.json") + " --fan " + data("hexagon.json") + " --data " +
            data("prisms.csv"))
            .code != 0);
  CHECK(run("reconstruct --data " + data("prisms.csv")).code == 2);

  const Run limit = run("reconstruct --fan " + data("delta1.json") + " --data " + data("prisms_y10.csv") +
                        " --max-iter 1");
  CHECK(limit.code == 4);
}

TEST_CASE("uniqueness") {
  const Run ex = run("uniqueness --fan " + data("hexagon.json") + " --data " + data("hexagon_segment.csv"));
  CHECK(ex.code == 0);
  CHECK(has(ex.out, "matching 6, rank 5, unique: no"));
  CHECK(has(ex.out, "unique for all y: no"));

  put("rays.csv", "1,0,1\n0.5,0.8660254037844386,1\n-0.5,0.8660254037844387,1\n-1,0,1\n-0.5,-0.8660254037844386,1\n"
                  "0.5,-0.8660254037844386,1\n");
  const Run id = run("uniqueness --fan " + data("hexagon.json") + " --data rays.csv");
  CHECK(id.code == 0);
  CHECK(has(id.out, "unique: yes"));

  put("five.csv", "1,0,1\n0.5,0.8660254037844386,1\n-0.5,0.8660254037844387,1\n-1,0,1\n-0.5,-0.8660254037844386,1\n");
  const Run few = run("uniqueness --fan " + data("hexagon.json") + " --data five.csv");
  CHECK(few.code == 0);
  CHECK(has(few.out, "matching 5, rank 5, unique: no"));
}

TEST_CASE("simulate") {
  const Run infeasible = run("simulate --t 0.1 --delta 0.05 --n 6");
  CHECK(infeasible.code == 5);
  CHECK(has(infeasible.out, "t = 0.10000000000000001"));
  CHECK(has(infeasible.out, "delta = 0.050000000000000003"));

  const Run a = run("simulate --fan " + data("hexagon.json") + " --out rec_a.csv --plot rec.svg --seed 42");
  CHECK(a.code == 0);
  CHECK(has(a.out, "slope "));
  const Run b = run("simulate --fan " + data("hexagon.json") + " --out rec_b.csv --seed 42");
  CHECK(b.code == 0);
  const std::string ra = slurp("rec_a.csv");
  CHECK(ra == slurp("rec_b.csv"));
  CHECK(ra.rfind("# format: polyrecon-records/1\nm,replicate,hausdorff_error,objective,elapsed,bound,status\n", 0) == 0);
  int lines = 0;
  for (char c : ra) lines += c == '\n';
  CHECK(lines == 2 + 3 * 20);
  CHECK(slurp("rec_a.csv.meta.json") == slurp("rec_b.csv.meta.json"));
  const auto meta = nlohmann::json::parse(slurp("rec_a.csv.meta.json"));
  CHECK(meta["generator"] == "mt19937_64+marsaglia-polar");
  CHECK(meta["seed"] == 42);
  CHECK(slurp("rec.svg").rfind("<svg", 0) == 0);

  const Run other = run("simulate --n 6 --m 50,100 --reps 3 --seed 43 --out rec_c.csv");
  CHECK(other.code == 0);
  CHECK(slurp("rec_c.csv") != ra);

  CHECK(run("simulate --n 6 --h0 1,1,1,1,1,10").code == 3);
  CHECK(run("simulate --n 6 --t 0.01").code == 2);
  CHECK(run("simulate --fan " + data("hexagon.json") + " --n 6").code == 2);
}

TEST_CASE("make-fan round-trips through fan-info") {
  CHECK(run("make-fan --n 8 --out octagon.json").code == 0);
  const polyrecon::SimplicialFan f = polyrecon::read_fan("octagon.json");
  CHECK(f.rays.size() == 8);
  CHECK(polyrecon::fan_to_json(f) == slurp("octagon.json"));
  CHECK(run("fan-info octagon.json").code == 0);
  CHECK(run("--version").out.find(polyrecon::kVersion) != std::string::npos);
  CHECK(run("").code == 2);
}
