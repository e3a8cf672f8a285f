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

#include "biosim/mechanics.hpp"
#include "biosim/scenarios/scenario.hpp"

namespace biosim {

struct SpheroidParams {
  int cells = 2000;
  double cluster_diameter = 310.0;
  /// Cells divide once they reach this diameter.
  double division_diameter = 16.0;
  /// Days for a freshly divided cell to grow back to division size.
  double doubling_days = 8.0;
  double brownian_sigma = 1.5;
  double apoptosis_probability = 0.001;
  int steps_per_day = 4;
  double start_day = 3.0;
  double end_day = 15.0;
  int relaxation_steps = 50;
  MechanicsParams mechanics{10.0, 4.0, 0.2, 50.0, 3.0, false};

  /// The three initial populations with their cluster diameters.
  static SpheroidParams for_case(int cells);
  static SpheroidParams from(const ParamSet& params);
  static const std::vector<std::string>& keys();

  double division_volume() const;
  /// µm^3 per step.
  double growth_rate() const;
  void validate() const;
};

/// Growth, division (ratio 0.5, random axis), Brownian motion and apoptosis.
Behavior spheroid_cell_behavior(const SpheroidParams& params);

struct SpheroidRun {
  /// Channels day, cells, diameter; one row per simulated day.
  TimeSeries series;
  SimulationReport report;
};

SpheroidRun run_spheroid(const SpheroidParams& params, std::uint64_t seed, int threads = 1);

ScenarioResult spheroid_scenario(const RunOptions& options);

}  // namespace biosim
