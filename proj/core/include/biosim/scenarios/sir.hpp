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

#include <array>
#include <functional>
#include <memory>

#include "biosim/analysis/pso.hpp"
#include "biosim/analysis/sir.hpp"
#include "biosim/scenarios/scenario.hpp"

namespace biosim {

struct SirParams {
  int susceptible = 2000;
  int infected = 10;
  double cube = 100.0;
  double infection_radius = 3.6;
  double infection_probability = 1.0;
  /// Per step.
  double recovery_probability = 0.125 / 4.0;
  double max_move = 100.0;
  int steps_per_day = 4;
  double days = 60.0;
  double agent_diameter = 1.0;

  /// Recovery probability gamma / steps_per_day for the given disease.
  static SirParams for_disease(double r0, double recovery_days, int steps_per_day = 4);
  static SirParams from(const ParamSet& params);
  static SirParams from(const ParamSet& params, SirParams defaults);
  static const std::vector<std::string>& keys();

  std::int64_t steps() const;
  void validate() const;
};

/// Reflects `x` into [0, length] (repeatedly for long moves).
double reflect_into(double x, double length);

/// Recovery, infection and movement, run in that order on every agent.
Behavior sir_behavior(const SirParams& params);

/// Builds the population and the schedule: count, then behaviors.
std::unique_ptr<Simulation> make_sir_simulation(const SirParams& params, std::uint64_t seed,
                                                int threads,
                                                std::shared_ptr<TimeSeries> counts);

struct SirRun {
  /// S, I, R at every step start plus once after the last step.
  TimeSeries counts;
  SimulationReport report;
};

/// `observer` is called after every step with the live simulation.
SirRun run_sir(const SirParams& params, std::uint64_t seed, int threads = 1,
               const std::function<void(const Simulation&)>& observer = {});

/// Mean agent curves of `repetitions` runs (seeds seed, seed+1, ...) against
/// the RK4 solution with beta, gamma from (r0, recovery_days).
struct SirComparison {
  /// Day, mean S/I/R of the agent runs and the ODE values at the same days.
  TimeSeries curves;
  std::array<double, 3> rmse{};
  /// Fraction of N ever infected: agent mean, ODE at the end of the run,
  /// and the final-size relation.
  double agent_attack = 0.0;
  double ode_attack = 0.0;
  double final_size_attack = 0.0;
  double loss = 0.0;
};

SirComparison compare_sir_to_ode(const SirParams& params, double r0, double recovery_days,
                                 int repetitions, std::uint64_t seed, int threads = 1);

struct SirCalibrationSettings {
  double r0 = 12.9;
  double recovery_days = 8.0;
  SirParams base;
  int repetitions = 10;
  std::uint64_t seed = 0;
  /// Bounds on (infection_radius, infection_probability, max_move).
  std::vector<double> lower{0.5, 0.05, 0.5};
  std::vector<double> upper{10.0, 1.0, 100.0};
  int particles = 30;
  int iterations = 100;
  int threads = 1;
  /// Seeds the swarm with the well-mixed estimate when true.
  bool warm_start = true;
};

struct SirCalibration {
  SirParams fitted;
  PsoResult pso;
};

/// Radius for which p * (4/3 pi r^3) matches beta_step * V / N in a
/// well-mixed population, i.e. the same initial force of infection.
double well_mixed_radius(const SirParams& params, double r0, double recovery_days,
                         double probability);

/// PSO over (infection radius, infection probability, max move); the loss is
/// the summed per-compartment RMSE of the mean agent curves divided by N.
SirCalibration calibrate_sir(const SirCalibrationSettings& settings);

ScenarioResult sir_scenario(const RunOptions& options);

}  // namespace biosim
