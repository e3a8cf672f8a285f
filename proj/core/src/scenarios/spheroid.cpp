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

#include "biosim/scenarios/spheroid.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "biosim/analysis/convex_hull.hpp"

namespace biosim {

SpheroidParams SpheroidParams::for_case(int cells) {
  SpheroidParams p;
  p.cells = cells;
  switch (cells) {
    case 2000: p.cluster_diameter = 310.0; break;
    case 4000: p.cluster_diameter = 380.0; break;
    case 8000: p.cluster_diameter = 460.0; break;
    default:
      throw ConfigError(fmt::format("spheroid: case must be 2000, 4000 or 8000, got {}", cells));
  }
  return p;
}

const std::vector<std::string>& SpheroidParams::keys() {
  static const std::vector<std::string> k{
      "case",          "cells",           "cluster_diameter", "division_diameter",
      "doubling_days", "brownian_sigma",  "apoptosis_probability", "steps_per_day",
      "start_day",     "end_day",         "relaxation_steps", "stiffness",
      "viscosity"};
  return k;
}

SpheroidParams SpheroidParams::from(const ParamSet& ps) {
  ps.check_known(keys(), "scenario spheroid");
  SpheroidParams p = for_case(static_cast<int>(ps.get_int("case", 2000)));
  p.cells = static_cast<int>(ps.get_int("cells", p.cells));
  p.cluster_diameter = ps.get_double("cluster_diameter", p.cluster_diameter);
  p.division_diameter = ps.get_double("division_diameter", p.division_diameter);
  p.doubling_days = ps.get_double("doubling_days", p.doubling_days);
  p.brownian_sigma = ps.get_double("brownian_sigma", p.brownian_sigma);
  p.apoptosis_probability = ps.get_double("apoptosis_probability", p.apoptosis_probability);
  p.steps_per_day = static_cast<int>(ps.get_int("steps_per_day", p.steps_per_day));
  p.start_day = ps.get_double("start_day", p.start_day);
  p.end_day = ps.get_double("end_day", p.end_day);
  p.relaxation_steps = static_cast<int>(ps.get_int("relaxation_steps", p.relaxation_steps));
  p.mechanics.stiffness = ps.get_double("stiffness", p.mechanics.stiffness);
  p.mechanics.viscosity = ps.get_double("viscosity", p.mechanics.viscosity);
  p.validate();
  return p;
}

double SpheroidParams::division_volume() const {
  return std::numbers::pi / 6.0 * division_diameter * division_diameter * division_diameter;
}

double SpheroidParams::growth_rate() const {
  return 0.5 * division_volume() / (doubling_days * steps_per_day);
}

void SpheroidParams::validate() const {
  if (cells < 1 || !(cluster_diameter > 0.0) || !(division_diameter > 0.0)) {
    throw ConfigError("spheroid: cells, cluster and division diameters must be positive");
  }
  if (!(doubling_days > 0.0) || brownian_sigma < 0.0) {
    throw ConfigError("spheroid: doubling_days > 0 and brownian_sigma >= 0 required");
  }
  if (!(apoptosis_probability >= 0.0 && apoptosis_probability <= 1.0)) {
    throw ConfigError("spheroid: apoptosis_probability must lie in [0, 1]");
  }
  if (steps_per_day < 1 || end_day < start_day || relaxation_steps < 0) {
    throw ConfigError("spheroid: steps_per_day >= 1, end_day >= start_day, relaxation_steps >= 0");
  }
  mechanics.validate();
}

Behavior spheroid_cell_behavior(const SpheroidParams& params) {
  const double rate = params.growth_rate();
  const double threshold = params.division_diameter;
  Behavior b("spheroid cell", [=](Agent& cell, AgentContext& ctx) {
    SplitMix64& rng = ctx.rng();
    if (rate > 0.0) cell.set_volume(cell.volume() + rate * ctx.dt());
    if (cell.diameter >= threshold) {
      ctx.enqueue(NewAgentEvent::cell_division(cell.id(), 0.5, random_unit_vector(rng)));
    }
    if (params.brownian_sigma > 0.0) {
      cell.position += random_normal_vector(rng, params.brownian_sigma);
      cell.proximal = cell.distal = cell.position;
    }
    if (bernoulli(rng, params.apoptosis_probability)) ctx.remove_agent(cell.id());
  });
  b.copy_on(EventKind::kCellDivision);
  return b;
}

SpheroidRun run_spheroid(const SpheroidParams& params, std::uint64_t seed, int threads) {
  params.validate();
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.box_margin = params.mechanics.adhesion_range;
  Simulation sim(cfg);

  SplitMix64 rng = sim.random().substream(~0ULL, 0, 0x5350);
  const double vd = params.division_volume();
  const Behavior behavior = spheroid_cell_behavior(params);
  std::vector<Agent> cells;
  for (int i = 0; i < params.cells; ++i) {
    Agent a = Agent::sphere(random_in_ball(rng, 0.5 * params.cluster_diameter), 1.0);
    a.set_volume(vd * (0.5 + 0.5 * uniform01(rng)));
    cells.push_back(std::move(a));
  }
  for (Agent& a : cells) sim.add_agent(std::move(a));

  sim.add_operation(mechanical_forces_op(params.mechanics));
  SpheroidRun run;
  run.report = sim.simulate(params.relaxation_steps);

  for (Agent& a : sim.agents()) a.add_behavior(behavior);
  sim.add_operation(behaviors_op());

  run.series = TimeSeries({"day", "cells", "diameter"});
  auto sample = [&](double day) {
    std::vector<Vec3> centers;
    centers.reserve(sim.population());
    for (const Agent& a : sim.agents()) centers.push_back(a.position);
    const HullDiameter h = convex_hull_diameter(centers);
    run.series.append(sim.step(), {day, static_cast<double>(sim.population()), h.diameter});
  };
  sample(params.start_day);
  const int days = static_cast<int>(std::llround(params.end_day - params.start_day));
  for (int d = 1; d <= days; ++d) {
    const SimulationReport r = sim.simulate(params.steps_per_day);
    run.report.births += r.births;
    run.report.deaths += r.deaths;
    run.report.wall_seconds += r.wall_seconds;
    run.report.timings = r.timings;
    sample(params.start_day + d);
  }
  run.report.final_step = sim.step();
  run.report.steps = sim.step();
  run.report.population = sim.population();
  return run;
}

ScenarioResult spheroid_scenario(const RunOptions& options) {
  SpheroidParams params = SpheroidParams::from(options.params);
  if (options.steps >= 0) {
    params.end_day = params.start_day + std::floor(static_cast<double>(options.steps) /
                                                   params.steps_per_day);
  }
  SpheroidRun run = run_spheroid(params, options.seed, options.threads);
  ScenarioResult out;
  const auto diam = run.series.column("diameter");
  out.summary = {{"initial_diameter", diam.front()}, {"final_diameter", diam.back()}};
  for (std::size_t i = 0; i < run.series.size(); ++i) {
    out.population.emplace_back(run.series.steps()[i],
                                static_cast<std::size_t>(run.series.at(i, 1)));
  }
  out.report = run.report;
  out.series.emplace_back("spheroid", std::move(run.series));
  return out;
}

}  // namespace biosim
