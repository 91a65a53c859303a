#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "graphdim_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + GRAPHDIM_CLI_PATH + "\" " + args + " >" +
                          (work_dir() / "stdout.txt").string() + " 2>" + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string path(const std::string& name) { return (work_dir() / name).string(); }

}  // namespace

TEST_CASE("synth then estimate") {
  CHECK(run("synth --kind sphere --d 2 --p 4 --n 400 --seed 3 --noise 0 --out " + path("s2.csv")) == 0);
  CHECK(run("estimate --in " + path("s2.csv") + " --method qe --k 40 --out " + path("est.json")) == 0);
  const auto j = nlohmann::json::parse(slurp(work_dir() / "est.json"));
  CHECK(j["d_hat"].get<double>() == doctest::Approx(2.0).epsilon(0.05));

  CHECK(run("estimate --in " + path("s2.csv") + " --method tls --k-grid 20:60:10 --window 3") == 0);
  const auto g = nlohmann::json::parse(slurp(work_dir() / "stdout.txt"));
  CHECK(g["per_k"].size() == 5);
  CHECK(g.contains("stability"));
}

TEST_CASE("synth to stdout is deterministic") {
  CHECK(run("synth --kind torus --d 2 --p 5 --n 50 --seed 11") == 0);
  const auto first = slurp(work_dir() / "stdout.txt");
  CHECK(run("synth --kind torus --d 2 --p 5 --n 50 --seed 11") == 0);
  CHECK(slurp(work_dir() / "stdout.txt") == first);
  CHECK(std::count(first.begin(), first.end(), '\n') == 50);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("synth --kind sphere --p 4") == 1);
  CHECK(run("synth --kind hypercube --d 2 --p 4") == 1);
  CHECK(run("synth --kind sphere --d 4 --p 4") == 1);
  CHECK(run("synth --kind sphere --d 2 --p 4 --param Q=1") == 1);
  CHECK(run("estimate --in " + path("s2.csv") + " --method danco") == 1);
  CHECK(run("estimate --in " + path("s2.csv") + " --k-grid 50:10:5") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("data errors exit with 2") {
  CHECK(run("estimate --in " + path("does_not_exist.csv")) == 2);
  put(work_dir() / "ragged.csv", "1,2,3\n4,5\n");
  CHECK(run("estimate --in " + path("ragged.csv")) == 2);
  CHECK(slurp(work_dir() / "stderr.txt").find("row 2") != std::string::npos);
  put(work_dir() / "word.csv", "1,2\n3,four\n");
  CHECK(run("estimate --in " + path("word.csv")) == 2);
  put(work_dir() / "bad.json", "{not json");
  CHECK(run("bench --config " + path("bad.json") + " --out " + path("out")) == 2);
}

TEST_CASE("estimation failures exit with 3") {
  CHECK(run("synth --kind sphere --d 1 --p 2 --n 80 --seed 1 --out " + path("circle.csv")) == 0);
  CHECK(run("estimate --in " + path("circle.csv") + " --method tls --k 10") == 3);
  CHECK(run("estimate --in " + path("circle.csv") + " --method tls --k-grid 10,20") == 3);
}

TEST_CASE("bench writes result files honoring the thread cap") {
  const nlohmann::json cfg = {
      {"manifolds", {{{"id", "S2"}, {"kind", "sphere"}, {"d", 2}, {"p", 3}}}},
      {"methods", {"qe", "twonn"}},
      {"n", 120},
      {"replicates", 2},
      {"k_grid", "20:40:10"},
      {"window", 2},
      {"master_seed", 4}};
  put(work_dir() / "cfg.json", cfg.dump());
  CHECK(run("bench --config " + path("cfg.json") + " --out " + path("bench1")) == 0);
  CHECK(run("bench --config " + path("cfg.json") + " --out " + path("bench2")) == 0);
  for (const char* f : {"results.csv", "results.json", "timings.csv"}) {
    CHECK(fs::exists(work_dir() / "bench1" / f));
  }
  CHECK(slurp(work_dir() / "bench1" / "results.json") == slurp(work_dir() / "bench2" / "results.json"));
  const std::string capped =
      "GRAPHDIM_THREADS=1 \"" + std::string(GRAPHDIM_CLI_PATH) + "\" bench --config " + path("cfg.json") +
      " --out " + path("bench3") + " >/dev/null 2>&1";
  const int status = std::system(capped.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(slurp(work_dir() / "bench3" / "results.json") == slurp(work_dir() / "bench1" / "results.json"));
}
