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

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "biosim/mechanics.hpp"
#include "biosim/scenarios/scenario.hpp"

namespace biosim {

struct CellGrowthParams {
  int scale = 4;
  double spacing = 10.0;
  double division_diameter = 10.0;
  /// Steps a cell needs to grow from half to full division volume.
  int steps_to_divide = 4;
  MechanicsParams mechanics{10.0, 4.0, 0.2, 25.0, 3.0, false};

  double division_volume() const;
  double growth_rate() const;
};

struct SomaClusteringParams {
  int scale = 8;
  double cell_diameter = 10.0;
  /// Side of the cube the cells start in; 0 picks 2.5 diameters per scale unit.
  double domain = 0.0;
  double field_spacing = 10.0;
  double diffusion = 10.0;
  double decay = 0.01;
  double secretion = 1.0;
  double speed = 1.0;
  /// Gradients below this magnitude are ignored.
  double gradient_threshold = 1e-6;
  MechanicsParams mechanics{10.0, 4.0, 0.2, 25.0, 3.0, false};

  double side() const;
};

struct Benchmark {
  std::unique_ptr<Simulation> sim;
  std::string name;
  std::int64_t default_steps = 10;
};

const std::vector<std::string>& benchmark_names();

/// Throws std::invalid_argument for scale < 1 and std::out_of_range for an
/// unknown name (listing the valid ones).
Benchmark build_benchmark(std::string_view name, int scale, std::uint64_t seed, int threads);

std::unique_ptr<Simulation> make_cell_growth_division(const CellGrowthParams& params,
                                                      std::uint64_t seed, int threads);
std::unique_ptr<Simulation> make_soma_clustering(const SomaClusteringParams& params,
                                                 std::uint64_t seed, int threads);

/// Mean over cells of the fraction of same-type cells among the neighbors
/// within `radius`; cells without neighbors are left out.
double same_type_neighbor_fraction(const Simulation& sim, double radius);

ScenarioResult cell_growth_division_scenario(const RunOptions& options);
ScenarioResult soma_clustering_scenario(const RunOptions& options);

}  // namespace biosim
