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

#include "biosim/scenarios/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace biosim {

double CellGrowthParams::division_volume() const {
  return std::numbers::pi / 6.0 * division_diameter * division_diameter * division_diameter;
}

double CellGrowthParams::growth_rate() const {
  return 0.5 * division_volume() / steps_to_divide;
}

double SomaClusteringParams::side() const { return domain > 0.0 ? domain : 2.5 * cell_diameter * scale; }

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"cell_growth_division", "soma_clustering"};
  return names;
}

std::unique_ptr<Simulation> make_cell_growth_division(const CellGrowthParams& params,
                                                      std::uint64_t seed, int threads) {
  if (params.scale < 1) throw std::invalid_argument("cell_growth_division: scale must be >= 1");
  if (params.steps_to_divide < 1) {
    throw std::invalid_argument("cell_growth_division: steps_to_divide must be >= 1");
  }
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.box_margin = params.mechanics.adhesion_range;
  auto sim = std::make_unique<Simulation>(cfg);

  const double vd = params.division_volume();
  const double rate = params.growth_rate();
  // Volume comparison with a relative slack so that T growth steps always reach it.
  const double trigger = vd * (1.0 - 1e-9);
  Behavior grow("grow and divide", [rate, trigger](Agent& cell, AgentContext& ctx) {
    cell.set_volume(cell.volume() + rate * ctx.dt());
    if (cell.volume() >= trigger) {
      ctx.enqueue(NewAgentEvent::cell_division(cell.id(), 0.5, random_unit_vector(ctx.rng())));
    }
  });
  grow.copy_on(EventKind::kCellDivision);

  const int n = params.scale;
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        Agent a = Agent::sphere({x * params.spacing, y * params.spacing, z * params.spacing}, 1.0);
        a.set_volume(0.5 * vd);
        a.add_behavior(grow);
        sim->add_agent(std::move(a));
      }
    }
  }
  sim->add_operation(behaviors_op());
  sim->add_operation(mechanical_forces_op(params.mechanics));
  return sim;
}

std::unique_ptr<Simulation> make_soma_clustering(const SomaClusteringParams& params,
                                                 std::uint64_t seed, int threads) {
  if (params.scale < 1) throw std::invalid_argument("soma_clustering: scale must be >= 1");
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.box_margin = params.mechanics.adhesion_range;
  auto sim = std::make_unique<Simulation>(cfg);
  const double side = params.side();

  DiffusionSpec spec;
  spec.spacing = params.field_spacing;
  const int nodes = static_cast<int>(std::ceil(side / params.field_spacing)) + 1;
  spec.dims = {nodes, nodes, nodes};
  spec.diffusion = params.diffusion;
  spec.decay = params.decay;
  spec.boundary = Boundary::kClosed;
  spec.dt = sim->dt();
  std::array<std::size_t, 2> fields{};
  spec.name = "substance_0";
  fields[0] = sim->add_field(spec);
  spec.name = "substance_1";
  fields[1] = sim->add_field(spec);

  Behavior chemotaxis("secrete and follow", [params, fields, side](Agent& cell, AgentContext& ctx) {
    const auto type = static_cast<std::size_t>(cell.state);
    ctx.secrete(fields[type], cell.position, params.secretion);
    const Vec3 g = ctx.field(fields[type]).gradient_at(cell.position);
    if (norm(g) > params.gradient_threshold) {
      Vec3 p = cell.position + normalized(g) * (params.speed * ctx.dt());
      for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a], 0.0, side);
      cell.position = cell.proximal = cell.distal = p;
    }
  });

  SplitMix64 rng = sim->random().substream(~0ULL, 0, 0x534f);
  const int count = 2 * params.scale * params.scale * params.scale;
  for (int i = 0; i < count; ++i) {
    Agent a = Agent::sphere(
        {uniform01(rng) * side, uniform01(rng) * side, uniform01(rng) * side}, params.cell_diameter);
    a.state = i % 2;
    a.add_behavior(chemotaxis);
    sim->add_agent(std::move(a));
  }
  sim->add_operation(behaviors_op());
  sim->add_operation(mechanical_forces_op(params.mechanics));
  sim->add_operation(diffusion_op());
  return sim;
}

Benchmark build_benchmark(std::string_view name, int scale, std::uint64_t seed, int threads) {
  if (scale < 1) throw std::invalid_argument("benchmark scale must be >= 1");
  Benchmark b;
  b.name = std::string(name);
  if (name == "cell_growth_division") {
    CellGrowthParams p;
    p.scale = scale;
    b.sim = make_cell_growth_division(p, seed, threads);
    b.default_steps = 10;
  } else if (name == "soma_clustering") {
    SomaClusteringParams p;
    p.scale = scale;
    b.sim = make_soma_clustering(p, seed, threads);
    b.default_steps = 10;
  } else {
    std::string list;
    for (const auto& n : benchmark_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::out_of_range(fmt::format("unknown benchmark '{}' (valid: {})", name, list));
  }
  return b;
}

double same_type_neighbor_fraction(const Simulation& sim, double radius) {
  const auto agents = sim.agents();
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    int same = 0;
    int total = 0;
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (i == j || distance(agents[i].position, agents[j].position) > radius) continue;
      ++total;
      same += agents[i].state == agents[j].state ? 1 : 0;
    }
    if (total > 0) {
      sum += static_cast<double>(same) / total;
      ++counted;
    }
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

namespace {

ScenarioResult run_benchmark_scenario(std::string_view name, const RunOptions& options,
                                      std::int64_t default_steps) {
  options.params.check_known({"scale"}, std::string("scenario ") + std::string(name));
  const int scale = static_cast<int>(options.params.get_int("scale", name == "soma_clustering" ? 8 : 4));
  Benchmark b = build_benchmark(name, scale, options.seed, options.threads);
  const std::int64_t steps = options.steps >= 0 ? options.steps : default_steps;
  TimeSeries pop({"population"});
  ScenarioResult out;
  pop.append(b.sim->step(), {static_cast<double>(b.sim->population())});
  out.population.emplace_back(b.sim->step(), b.sim->population());
  for (std::int64_t s = 0; s < steps; ++s) {
    const SimulationReport r = b.sim->simulate(1);
    out.report.births += r.births;
    out.report.deaths += r.deaths;
    out.report.wall_seconds += r.wall_seconds;
    out.report.timings = r.timings;
    pop.append(b.sim->step(), {static_cast<double>(b.sim->population())});
    out.population.emplace_back(b.sim->step(), b.sim->population());
  }
  out.report.steps = steps;
  out.report.final_step = b.sim->step();
  out.report.population = b.sim->population();
  if (name == "soma_clustering") {
    out.summary.emplace_back("same_type_fraction", same_type_neighbor_fraction(*b.sim, 20.0));
  }
  out.series.emplace_back("population", std::move(pop));
  return out;
}

}  // namespace

ScenarioResult cell_growth_division_scenario(const RunOptions& options) {
  return run_benchmark_scenario("cell_growth_division", options, 10);
}

ScenarioResult soma_clustering_scenario(const RunOptions& options) {
  return run_benchmark_scenario("soma_clustering", options, 1000);
}

}  // namespace biosim
