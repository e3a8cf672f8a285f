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


#include <benchmark/benchmark.h>

#include <vector>

#include "biosim/diffusion_grid.hpp"
#include "biosim/mechanics.hpp"
#include "biosim/random.hpp"
#include "biosim/scenarios/benchmarks.hpp"
#include "biosim/simulation.hpp"
#include "biosim/uniform_grid.hpp"

using namespace biosim;

namespace {

/// Spheres of diameter 10 at roughly 30% volume fraction.
std::vector<Agent> cloud(std::size_t n, std::uint64_t seed) {
  Simulation sim;
  SplitMix64 rng(seed);
  const double side = std::cbrt(static_cast<double>(n) * 524.0 / 0.3);
  for (std::size_t i = 0; i < n; ++i) {
    sim.add_agent(Agent::sphere({side * uniform01(rng), side * uniform01(rng), side * uniform01(rng)}, 10.0));
  }
  return {sim.agents().begin(), sim.agents().end()};
}

void BM_GridRebuild(benchmark::State& state) {
  const auto agents = cloud(static_cast<std::size_t>(state.range(0)), 1);
  UniformGrid grid;
  UniformGrid::Options options;
  options.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    grid.rebuild(agents, options);
    benchmark::DoNotOptimize(grid.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GridRebuild)->Args({10000, 1})->Args({100000, 1})->Args({100000, 4});

void BM_NeighborQuery(benchmark::State& state) {
  const auto agents = cloud(static_cast<std::size_t>(state.range(0)), 2);
  UniformGrid grid;
  grid.rebuild(agents, {});
  const double radius = grid.box_length();
  for (auto _ : state) {
    std::size_t found = 0;
    for (const GridEntry& e : grid.entries()) grid.for_each_neighbor(e, radius, [&](const GridEntry&) { ++found; });
    benchmark::DoNotOptimize(found);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NeighborQuery)->Arg(10000)->Arg(100000);

void BM_DiffusionStep(benchmark::State& state) {
  DiffusionSpec s;
  s.name = "bench";
  const int n = static_cast<int>(state.range(0));
  s.dims = {n, n, n};
  s.spacing = 1.0;
  s.diffusion = 0.1;
  s.dt = 1.0;
  s.threads = static_cast<int>(state.range(1));
  DiffusionGrid g(s);
  g.init_gaussian_axis(2, n / 2.0, n / 8.0, 1.0);
  for (auto _ : state) g.step();
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_DiffusionStep)->Args({64, 1})->Args({128, 1})->Args({128, 4});

void BM_ContactForces(benchmark::State& state) {
  const auto agents = cloud(static_cast<std::size_t>(state.range(0)), 3);
  MechanicsParams params;
  UniformGrid grid;
  UniformGrid::Options options;
  options.box_margin = params.adhesion_range;
  grid.rebuild(agents, options);
  for (auto _ : state) {
    Vec3 total;
    for (const GridEntry& e : grid.entries()) total += net_sphere_force(e, grid, params);
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ContactForces)->Arg(10000)->Arg(100000);

void BM_CellGrowthDivisionStep(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    Benchmark b = build_benchmark("cell_growth_division", 16, 0, static_cast<int>(state.range(0)));
    state.ResumeTiming();
    b.sim->simulate(5);
  }
}
BENCHMARK(BM_CellGrowthDivisionStep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
