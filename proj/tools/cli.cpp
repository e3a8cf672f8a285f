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


#include "cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <json.hpp>

#include "biosim/config.hpp"
#include "biosim/parallel.hpp"
#include "biosim/scenarios/benchmarks.hpp"
#include "biosim/scenarios/scenario.hpp"
#include "biosim/scenarios/sir.hpp"

namespace biosim::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Signals an exit code together with a message for stderr.
struct CliError : std::runtime_error {
  CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("error while writing " + path.string());
}

std::string plot_script(const std::string& csv, const std::string& title) {
  return fmt::format(R"py(# Plots {0}. Usage: python3 {1}
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{0}")) as f:
    rows = list(csv.DictReader(f))
if not rows:
    raise SystemExit("{0} is empty")
columns = list(rows[0].keys())
x_name = "day" if "day" in columns else columns[0]
x = [float(r[x_name]) for r in rows]
fig, ax = plt.subplots(figsize=(7, 4))
for name in columns:
    if name in ("step", x_name):
        continue
    ax.plot(x, [float(r[name]) for r in rows], label=name)
ax.set_xlabel(x_name)
ax.set_title("{2}")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "{3}.png"), dpi=150)
)py",
                     csv, "plot_" + fs::path(csv).stem().string() + ".py", title,
                     fs::path(csv).stem().string());
}

std::string scaling_plot_script(const std::string& csv) {
  return fmt::format(R"py(# Plots median time and speedup from {0}.
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{0}")) as f:
    rows = list(csv.DictReader(f))
threads = [int(r["threads"]) for r in rows]
fig, (left, right) = plt.subplots(1, 2, figsize=(9, 4))
left.plot(threads, [float(r["median_seconds"]) for r in rows], "o-")
left.set_xlabel("threads")
left.set_ylabel("median wall time (s)")
right.plot(threads, [float(r["speedup"]) for r in rows], "o-", label="measured")
right.plot(threads, threads, "--", label="ideal")
right.set_xlabel("threads")
right.set_ylabel("speedup")
right.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "{1}.png"), dpi=150)
)py",
                     csv, fs::path(csv).stem().string());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// run

struct RunArgs {
  std::string scenario;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::int64_t> steps;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
};

int run_command(const RunArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
  ConfigFile file;
  if (!a.config.empty()) {
    try {
      file = ConfigFile::load(a.config);
    } catch (const std::exception& e) {
      throw CliError(kUsage, e.what());
    }
  }
  const ParamSet run_section = file.section("run");
  run_section.check_known({"scenario", "seed", "threads", "steps", "out"}, "section [run]");

  std::string name = a.scenario.empty() ? run_section.get_string("scenario", "") : a.scenario;
  if (name.empty()) {
    throw CliError(kUsage, "no scenario given (available: " + scenario_names() + ")");
  }
  const ScenarioInfo* info = nullptr;
  try {
    info = &find_scenario(name);
  } catch (const std::out_of_range& e) {
    throw CliError(kUsage, e.what());
  }
  for (const std::string& section : file.section_names()) {
    if (section != "run" && section != name) {
      throw ConfigError(fmt::format("unexpected section [{}] (expected [run] or [{}])", section, name));
    }
  }

  RunOptions options;
  options.seed = a.seed.value_or(run_section.get_uint("seed", 0));
  options.threads = a.threads.value_or(static_cast<int>(run_section.get_int("threads", 1)));
  options.steps = a.steps.value_or(run_section.get_int("steps", -1));
  if (options.threads < 1) throw CliError(kUsage, "--threads must be >= 1");
  options.params = file.section(name);
  for (const std::string& o : a.overrides) {
    const auto [key, value] = parse_override(o);
    options.params.set(key, value);
  }
  const fs::path dir = a.out.value_or(run_section.get_string("out", "biosim_out/" + name));

  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result = info->run(options);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::create_directories(dir);
  std::vector<std::string> artifacts;
  for (const auto& [series_name, series] : result.series) {
    const std::string csv = series_name + ".csv";
    series.write_csv((dir / csv).string());
    const std::string script = "plot_" + series_name + ".py";
    write_text(dir / script, plot_script(csv, name + ": " + series_name));
    artifacts.push_back(csv);
    artifacts.push_back(script);
  }
  for (const TextArtifact& f : result.files) {
    write_text(dir / f.file, f.content);
    artifacts.push_back(f.file);
  }

  json manifest;
  manifest["scenario"] = name;
  manifest["seed"] = options.seed;
  manifest["threads"] = options.threads;
  manifest["steps"] = result.report.steps;
  manifest["config"] = a.config;
  manifest["command"] = argv;
  json params = json::object();
  for (const auto& [k, v] : options.params.values()) params[k] = v;
  manifest["parameters"] = params;
  json summary = json::object();
  for (const auto& [k, v] : result.summary) summary[k] = v;
  manifest["summary"] = summary;
  manifest["wall_seconds"] = wall;
  manifest["births"] = result.report.births;
  manifest["deaths"] = result.report.deaths;
  json timings = json::array();
  for (const OperationTiming& t : result.report.timings) {
    timings.push_back({{"operation", t.name}, {"seconds", t.seconds}, {"invocations", t.invocations}});
  }
  manifest["timings"] = timings;
  json population = json::array();
  for (const auto& [step, count] : result.population) population.push_back({step, count});
  manifest["population"] = population;
  artifacts.push_back("manifest.json");
  manifest["artifacts"] = artifacts;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  fmt::print(out, "{}: {} steps, population {}, {:.3f} s\n", name, result.report.steps,
             result.report.population, wall);
  for (const auto& [k, v] : result.summary) fmt::print(out, "  {} = {}\n", k, v);
  fmt::print(out, "wrote {} files to {}\n", artifacts.size(), dir.string());
  return kOk;
}

// bench

struct BenchArgs {
  std::string name;
  std::vector<int> threads{1, 2, 4};
  int reps = 3;
  int scale = 8;
  std::int64_t steps = -1;
  std::uint64_t seed = 0;
  std::string out;
};

int bench_command(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.threads.empty()) throw CliError(kUsage, "--threads needs at least one value");
  for (int t : a.threads) {
    if (t < 1) throw CliError(kUsage, "--threads values must be >= 1");
  }
  if (a.reps < 1) throw CliError(kUsage, "--reps must be >= 1");
  if (std::find(benchmark_names().begin(), benchmark_names().end(), a.name) ==
      benchmark_names().end()) {
    std::string list;
    for (const auto& n : benchmark_names()) list += (list.empty() ? "" : ", ") + n;
    throw CliError(kUsage, fmt::format("unknown benchmark '{}' (available: {})", a.name, list));
  }
  if (a.scale < 1) throw CliError(kUsage, "--scale must be >= 1");
  const int hardware = detail::hardware_threads();
  for (int t : a.threads) {
    if (t > hardware) {
      fmt::print(err, "warning: {} threads requested but the host reports {} processors\n", t,
                 hardware);
    }
  }
  if (std::find(a.threads.begin(), a.threads.end(), 1) == a.threads.end()) {
    fmt::print(err, "warning: no 1-thread run; speedup is relative to {} threads\n", a.threads.front());
  }

  const auto rows = measure_scaling(a.name, a.scale, a.steps, a.threads, a.reps, a.seed);
  const fs::path path = a.out.empty() ? fs::path("bench_" + a.name + ".csv") : fs::path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write_scaling_csv(f, rows);
  }
  const fs::path script = path.parent_path() / ("plot_" + path.stem().string() + ".py");
  write_text(script, scaling_plot_script(path.filename().string()));

  fmt::print(out, "{} (scale {}, {} agents, median of {})\n", a.name, a.scale,
             rows.front().agents, a.reps);
  fmt::print(out, "{:>8} {:>14} {:>8} {:>10}\n", "threads", "median_s", "speedup", "efficiency");
  for (const ScalingRow& r : rows) {
    fmt::print(out, "{:>8} {:>14.6f} {:>8.3f} {:>10.3f}\n", r.threads, r.median_seconds, r.speedup,
               r.efficiency);
  }
  fmt::print(out, "wrote {}\n", path.string());
  return kOk;
}

// calibrate

struct CalibrateArgs {
  std::string target;
  std::string targets;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> particles;
  std::optional<int> iterations;
  std::optional<int> reps;
};

std::string fitted_config(const SirCalibrationSettings& s, const SirCalibration& c,
                          int verify_repetitions) {
  const SirParams& p = c.fitted;
  std::string text;
  text += "# SIR parameters fitted by particle swarm optimization\n";
  text += fmt::format("# loss = {} after {} evaluations\n\n", c.pso.best_loss, c.pso.evaluations);
  text += fmt::format("[run]\nscenario = \"sir\"\nseed = {}\n\n", s.seed);
  text += "[sir]\n";
  text += fmt::format("r0 = {}\n", s.r0);
  text += fmt::format("recovery_days = {}\n", s.recovery_days);
  text += fmt::format("repetitions = {}\n", verify_repetitions);
  text += fmt::format("susceptible = {}\n", p.susceptible);
  text += fmt::format("infected = {}\n", p.infected);
  text += fmt::format("cube = {}\n", p.cube);
  text += fmt::format("steps_per_day = {}\n", p.steps_per_day);
  text += fmt::format("days = {}\n", p.days);
  text += fmt::format("agent_diameter = {}\n", p.agent_diameter);
  text += fmt::format("infection_radius = {}\n", p.infection_radius);
  text += fmt::format("infection_probability = {}\n", p.infection_probability);
  text += fmt::format("max_move = {}\n", p.max_move);
  return text;
}

int calibrate_command(const CalibrateArgs& a, std::ostream& out) {
  if (a.target != "sir") {
    throw CliError(kUsage, fmt::format("calibration is only available for 'sir', not '{}'", a.target));
  }
  ConfigFile file;
  try {
    file = ConfigFile::load(a.targets);
  } catch (const std::exception& e) {
    throw CliError(kUsage, e.what());
  }
  for (const std::string& section : file.section_names()) {
    if (section != "targets" && section != "sir" && section != "pso") {
      throw ConfigError(fmt::format("unexpected section [{}] (expected [targets], [sir], [pso])", section));
    }
  }
  const ParamSet targets = file.section("targets");
  targets.check_known({"r0", "recovery_days"}, "section [targets]");
  if (!targets.contains("r0") || !targets.contains("recovery_days")) {
    throw ConfigError("section [targets] needs r0 and recovery_days");
  }
  const ParamSet pso = file.section("pso");
  pso.check_known({"particles", "iterations", "repetitions", "verify_repetitions", "seed",
                   "threads", "loss_ceiling", "warm_start", "radius_min", "radius_max",
                   "probability_min", "probability_max", "move_min", "move_max"},
                  "section [pso]");

  SirCalibrationSettings s;
  s.r0 = targets.get_double("r0", s.r0);
  s.recovery_days = targets.get_double("recovery_days", s.recovery_days);
  if (!(s.r0 > 0.0) || !(s.recovery_days > 0.0)) {
    throw ConfigError("r0 and recovery_days must be > 0");
  }
  s.base = SirParams::from(file.section("sir"));
  s.seed = a.seed.value_or(pso.get_uint("seed", 0));
  s.threads = a.threads.value_or(static_cast<int>(pso.get_int("threads", 1)));
  s.particles = a.particles.value_or(static_cast<int>(pso.get_int("particles", s.particles)));
  s.iterations = a.iterations.value_or(static_cast<int>(pso.get_int("iterations", s.iterations)));
  s.repetitions = a.reps.value_or(static_cast<int>(pso.get_int("repetitions", s.repetitions)));
  s.warm_start = pso.get_bool("warm_start", s.warm_start);
  s.lower = {pso.get_double("radius_min", s.lower[0]), pso.get_double("probability_min", s.lower[1]),
             pso.get_double("move_min", s.lower[2])};
  s.upper = {pso.get_double("radius_max", s.upper[0]), pso.get_double("probability_max", s.upper[1]),
             pso.get_double("move_max", s.upper[2])};
  const int verify = static_cast<int>(pso.get_int("verify_repetitions", 10));
  const double ceiling = pso.get_double("loss_ceiling", 0.15);

  const char* names[] = {"infection_radius", "infection_probability", "max_move"};
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(std::isfinite(s.lower[d]) && std::isfinite(s.upper[d]) && s.lower[d] < s.upper[d])) {
      throw CliError(kUsage, fmt::format("empty bounds for {}: [{}, {}]", names[d], s.lower[d],
                                         s.upper[d]));
    }
  }
  if (!(s.lower[0] > 0.0) || s.lower[1] < 0.0 || s.upper[1] > 1.0 || s.lower[2] < 0.0) {
    throw CliError(kUsage, "bounds must satisfy radius > 0, 0 <= probability <= 1, move >= 0");
  }
  if (s.threads < 1 || s.particles < 1 || s.iterations < 0 || s.repetitions < 1 || verify < 1) {
    throw CliError(kUsage, "threads, particles, repetitions must be >= 1 and iterations >= 0");
  }

  const SirCalibration c = calibrate_sir(s);

  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text(path, fitted_config(s, c, verify));
  const fs::path history = path.parent_path() / (path.stem().string() + "_history.csv");
  {
    std::ofstream f(history, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + history.string());
    write_pso_history(f, c.pso);
  }

  fmt::print(out, "best loss {} after {} evaluations\n", c.pso.best_loss, c.pso.evaluations);
  fmt::print(out, "  infection_radius = {}\n  infection_probability = {}\n  max_move = {}\n",
             c.fitted.infection_radius, c.fitted.infection_probability, c.fitted.max_move);
  fmt::print(out, "wrote {} and {}\n", path.string(), history.string());
  if (!(c.pso.best_loss <= ceiling)) {
    throw CliError(kFailure, fmt::format("loss {} exceeds the ceiling {}", c.pso.best_loss, ceiling));
  }
  return kOk;
}

}  // namespace

std::vector<ScalingRow> measure_scaling(const std::string& name, int scale, std::int64_t steps,
                                        const std::vector<int>& threads, int repetitions,
                                        std::uint64_t seed) {
  if (threads.empty() || repetitions < 1) {
    throw std::invalid_argument("measure_scaling: need threads and repetitions >= 1");
  }
  std::vector<ScalingRow> rows;
  for (int t : threads) {
    ScalingRow row;
    row.threads = t;
    for (int r = 0; r < repetitions; ++r) {
      Benchmark b = build_benchmark(name, scale, seed, t);
      row.agents = b.sim->population();
      const auto start = std::chrono::steady_clock::now();
      b.sim->simulate(steps < 0 ? b.default_steps : steps);
      row.samples.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    row.median_seconds = median(row.samples);
    rows.push_back(std::move(row));
  }
  auto base = std::find_if(rows.begin(), rows.end(), [](const ScalingRow& r) { return r.threads == 1; });
  const ScalingRow& ref = base != rows.end() ? *base : rows.front();
  for (ScalingRow& r : rows) {
    r.speedup = ref.median_seconds / r.median_seconds;
    r.efficiency = r.speedup * ref.threads / r.threads;
  }
  return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "threads,repetitions,median_seconds,speedup,efficiency,agents\n";
  for (const ScalingRow& r : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.threads, r.samples.size(), r.median_seconds, r.speedup,
               r.efficiency, r.agents);
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agent-based simulation engine with neurite, spheroid and epidemic scenarios",
               "biosim"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV, artifacts and a manifest");
  run->add_option("scenario", run_args.scenario, "scenario name (or [run] scenario in the config)");
  run->add_option("--config", run_args.config, "config file with [run] and [<scenario>] sections");
  run->add_option("--seed", run_args.seed, "random seed");
  run->add_option("--threads", run_args.threads, "worker threads");
  run->add_option("--steps", run_args.steps, "number of steps (scenario default otherwise)");
  run->add_option("--out", run_args.out, "output directory");
  run->add_option("--set", run_args.overrides, "parameter override key=value (repeatable)")
      ->allow_extra_args(false);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "time a benchmark over a thread sweep");
  bench->add_option("name", bench_args.name, "benchmark name")->required();
  bench->add_option("--threads", bench_args.threads, "comma separated thread counts")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--reps", bench_args.reps, "repetitions per thread count")->capture_default_str();
  bench->add_option("--scale", bench_args.scale, "benchmark scale")->capture_default_str();
  bench->add_option("--steps", bench_args.steps, "steps per repetition (benchmark default otherwise)");
  bench->add_option("--seed", bench_args.seed, "random seed")->capture_default_str();
  bench->add_option("--out", bench_args.out, "CSV path (default bench_<name>.csv)");

  CalibrateArgs cal_args;
  CLI::App* cal = app.add_subcommand("calibrate", "fit SIR spatial parameters to the ODE");
  cal->add_option("scenario", cal_args.target, "scenario to calibrate (sir)")->required();
  cal->add_option("--targets", cal_args.targets, "targets file with [targets], [sir], [pso]")->required();
  cal->add_option("--out", cal_args.out, "fitted config to write")->required();
  cal->add_option("--seed", cal_args.seed, "random seed");
  cal->add_option("--threads", cal_args.threads, "particles evaluated in parallel");
  cal->add_option("--particles", cal_args.particles, "swarm size");
  cal->add_option("--iterations", cal_args.iterations, "PSO iterations");
  cal->add_option("--reps", cal_args.reps, "agent runs per loss evaluation");

  CLI::App* list = app.add_subcommand("list", "list scenarios, parameters and benchmarks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::vector<std::string> argv{"biosim"};
  argv.insert(argv.end(), args.begin(), args.end());
  try {
    if (run->parsed()) return run_command(run_args, argv, out);
    if (bench->parsed()) return bench_command(bench_args, out, err);
    if (cal->parsed()) return calibrate_command(cal_args, out);
    if (list->parsed()) {
      for (const ScenarioInfo& s : scenario_registry()) {
        fmt::print(out, "{}: {}\n", s.name, s.description);
        std::string keys;
        for (const auto& k : s.parameters) keys += (keys.empty() ? "" : ", ") + k;
        fmt::print(out, "  parameters: {}\n", keys);
      }
      std::string names;
      for (const auto& n : benchmark_names()) names += (names.empty() ? "" : ", ") + n;
      fmt::print(out, "benchmarks: {}\n", names);
      return kOk;
    }
  } catch (const CliError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return e.code;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "invalid argument: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kFailure;
  }
  return kUsage;
}

}  // namespace biosim::cli
