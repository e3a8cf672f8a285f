// Copyright 2026 The biosim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = biosim::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp path, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("biosim_cli_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  TempDir dir("usage");
  Result r = run_cli({"run", "bogus", "--out", dir / "x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("pyramidal") != std::string::npos);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({"run", "sir", "--threads", "0", "--out", dir / "y"}).code == 2);
  CHECK(run_cli({"run", "sir", "--set", "nonsense", "--out", dir / "y"}).code == 2);
  CHECK(run_cli({"run", "sir", "--set", "no_such_key=1", "--out", dir / "y"}).code == 2);
  CHECK(run_cli({"bench", "bogus"}).code == 2);
  CHECK(run_cli({"bench", "cell_growth_division", "--scale", "0"}).code == 2);
  CHECK_FALSE(fs::exists(dir / "x"));

  write_file(dir / "broken.toml", "[run]\nseed = 1\nseed = 2\n");
  r = run_cli({"run", "sir", "--config", dir / "broken.toml", "--out", dir / "z"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  write_file(dir / "stray.toml", "[run]\nseed = 1\n[spheroid]\nend_day = 4\n");
  CHECK(run_cli({"run", "sir", "--config", dir / "stray.toml", "--out", dir / "z"}).code == 2);
}

TEST_CASE("list") {
  const Result r = run_cli({"list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("infection_radius") != std::string::npos);
  CHECK(r.out.find("benchmarks: cell_growth_division, soma_clustering") != std::string::npos);
}

TEST_CASE("runs are reproducible") {
  TempDir dir("repro");
  const std::vector<std::string> base{"run", "sir", "--seed", "42", "--threads", "1", "--steps", "40"};
  auto a = base;
  a.insert(a.end(), {"--out", dir / "a"});
  auto b = base;
  b.insert(b.end(), {"--out", dir / "b"});
  REQUIRE(run_cli(a).code == 0);
  REQUIRE(run_cli(b).code == 0);
  const std::string csv = slurp(dir / "a/sir_counts.csv");
  CHECK(csv.rfind("step,S,I,R\n0,2000,10,0\n", 0) == 0);
  CHECK(csv == slurp(dir / "b/sir_counts.csv"));
  const std::regex timestamp(R"(\d{4}-\d{2}-\d{2}|\d{2}:\d{2}:\d{2})");
  CHECK_FALSE(std::regex_search(csv, timestamp));

  const auto manifest = nlohmann::json::parse(slurp(dir / "a/manifest.json"));
  CHECK(manifest["scenario"] == "sir");
  CHECK(manifest["seed"] == 42);
  CHECK(manifest["steps"] == 40);
  for (const auto& artifact : manifest["artifacts"]) {
    CHECK(fs::exists(dir.path / "a" / artifact.get<std::string>()));
  }
  CHECK(manifest["command"].size() == base.size() + 3);
}

TEST_CASE("config file and flags") {
  TempDir dir("config");
  write_file(dir / "c.toml",
             "[run]\nscenario = \"sir\"\nseed = 3\nsteps = 8\n\n[sir]\nsusceptible = 50\ninfected = 5\n");
  REQUIRE(run_cli({"run", "--config", dir / "c.toml", "--steps", "12", "--out", dir / "o"}).code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "o/manifest.json"));
  CHECK(manifest["steps"] == 12);
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["parameters"]["susceptible"] == "50");
  CHECK(slurp(dir / "o/sir_counts.csv").rfind("step,S,I,R\n0,50,5,0\n", 0) == 0);
}

TEST_CASE("pyramidal artifacts") {
  TempDir dir("pyramidal");
  REQUIRE(run_cli({"run", "pyramidal", "--steps", "500", "--out", dir / "n"}).code == 0);
  const std::string swc = slurp(dir / "n/neuron.swc");
  CHECK(swc.find("\n1 1 ") != std::string::npos);
  const std::string morpho = slurp(dir / "n/morphometrics.csv");
  CHECK(morpho.rfind("step,", 0) == 0);
  CHECK(fs::exists(dir / "n/plot_morphometrics.py"));
}

TEST_CASE("bench") {
  TempDir dir("bench");
  Result r = run_cli({"bench", "cell_growth_division", "--threads", "1", "--reps", "3", "--scale", "3",
                      "--steps", "2", "--out", dir / "b.csv"});
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "b.csv"));
  std::string header;
  std::string row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "threads,repetitions,median_seconds,speedup,efficiency,agents");
  CHECK(row.rfind("1,3,", 0) == 0);
  CHECK(row.find(",1,1,27") != std::string::npos);
  CHECK(fs::exists(dir / "plot_b.py"));

  const auto rows = biosim::cli::measure_scaling("soma_clustering", 2, 3, {1, 2}, 2, 0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].speedup == 1.0);
  CHECK(rows[1].samples.size() == 2);
  CHECK(rows[1].efficiency == doctest::Approx(rows[1].speedup / 2));
}

TEST_CASE("calibrate") {
  TempDir dir("calibrate");
  write_file(dir / "empty.toml",
             "[targets]\nr0 = 2\nrecovery_days = 4\n[pso]\nradius_min = 3\nradius_max = 3\n");
  CHECK(run_cli({"calibrate", "sir", "--targets", dir / "empty.toml", "--out", dir / "f.toml"}).code == 2);
  write_file(dir / "missing.toml", "[targets]\nr0 = 2\n");
  CHECK(run_cli({"calibrate", "sir", "--targets", dir / "missing.toml", "--out", dir / "f.toml"}).code == 2);
  CHECK(run_cli({"calibrate", "spheroid", "--targets", dir / "missing.toml", "--out", dir / "f.toml"}).code ==
        2);

  write_file(dir / "t.toml",
             "[targets]\nr0 = 3\nrecovery_days = 2\n[sir]\nsusceptible = 200\ninfected = 10\ndays = 10\n"
             "[pso]\nparticles = 3\niterations = 1\nrepetitions = 1\nverify_repetitions = 2\n"
             "loss_ceiling = 1.0\n");
  const std::vector<std::string> args{"calibrate", "sir", "--targets", dir / "t.toml", "--seed", "5"};
  auto a = args;
  a.insert(a.end(), {"--out", dir / "fa.toml"});
  auto b = args;
  b.insert(b.end(), {"--out", dir / "fb.toml"});
  REQUIRE(run_cli(a).code == 0);
  REQUIRE(run_cli(b).code == 0);
  CHECK(slurp(dir / "fa.toml") == slurp(dir / "fb.toml"));
  CHECK(slurp(dir / "fa_history.csv") == slurp(dir / "fb_history.csv"));

  const Result fitted = run_cli({"run", "--config", dir / "fa.toml", "--out", dir / "run"});
  CHECK(fitted.code == 0);
  CHECK(fitted.out.find("rmse_S") != std::string::npos);
  CHECK(fs::exists(dir / "run/sir_mean_vs_ode.csv"));

  auto strict = args;
  strict.insert(strict.end(), {"--out", dir / "strict.toml"});
  std::string text = slurp(dir / "t.toml");
  text.replace(text.find("loss_ceiling = 1.0"), 18, "loss_ceiling = 0.0");
  write_file(dir / "t.toml", text);
  CHECK(run_cli(strict).code == 1);
  CHECK(fs::exists(dir / "strict.toml"));
}

}  // TEST_SUITE
