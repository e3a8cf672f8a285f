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

#include <functional>
#include <memory>

#include "biosim/analysis/morphometrics.hpp"
#include "biosim/neuro.hpp"
#include "biosim/scenarios/scenario.hpp"

namespace biosim {

struct GrowthWeights {
  double gradient = 0.0;
  double previous = 0.0;
  double random = 0.0;
};

struct PyramidalParams {
  double soma_diameter = 10.0;
  GrowthWeights apical{0.5, 0.3, 0.2};
  GrowthWeights basal{0.2, 0.6, 0.2};
  /// µm per step; basal dendrites grow at half this speed.
  double apical_speed = 0.6;
  double p_apical = 0.038;
  double p_basal = 0.006;
  double apical_diameter = 4.0;
  double basal_diameter = 2.0;
  double apical_taper = 0.002;
  double basal_taper = 0.004;
  NeuroParams neuro;

  /// Static growth-factor lattices, Gaussian along z.
  double field_spacing = 20.0;
  Vec3 field_min{-400.0, -400.0, -400.0};
  Vec3 field_max{400.0, 400.0, 600.0};
  double apical_mean = 600.0;
  double apical_sigma = 300.0;
  double basal_mean = -200.0;
  double basal_sigma = 200.0;
  double field_amplitude = 1.0;

  double dt = 1.0;
  std::int64_t steps = 500;
  std::int64_t sample_every = 50;

  double basal_speed() const { return 0.5 * apical_speed; }

  static PyramidalParams from(const ParamSet& params);
  static PyramidalParams from(const ParamSet& params, PyramidalParams defaults);
  static const std::vector<std::string>& keys();
  void validate() const;
};

struct PyramidalFields {
  std::size_t apical = 0;
  std::size_t basal = 0;
};

/// Unit vector w_g*g + w_p*prev + w_r*rand with the gradient term left out
/// when `gradient` is zero. Falls back to `previous` for a zero sum.
Vec3 growth_direction(const GrowthWeights& w, const Vec3& gradient, const Vec3& previous,
                      const Vec3& random);

/// Adds the two growth-factor fields and the operations (behaviors,
/// diffusion, neurite mechanics).
PyramidalFields install_pyramidal(Simulation& sim, const PyramidalParams& params);

/// Soma plus three basal roots and one apical root; returns the soma id.
AgentId add_pyramidal_neuron(Simulation& sim, const Vec3& position, const PyramidalParams& params,
                             const PyramidalFields& fields);

/// Growth behavior attached to every terminal element.
Behavior pyramidal_growth_behavior(const PyramidalParams& params, const PyramidalFields& fields);

struct BranchBookkeeping {
  std::int64_t apical_draws = 0;
  std::int64_t basal_draws = 0;
  int branch_points = 0;
  double expected = 0.0;
  double sigma = 0.0;
};

/// Draw counts recorded on the elements of `soma` and the binomial mean and
/// standard deviation of the number of bifurcations they imply.
BranchBookkeeping branch_bookkeeping(const Simulation& sim, AgentId soma,
                                     const PyramidalParams& params);

struct PyramidalRun {
  std::unique_ptr<Simulation> sim;
  AgentId soma;
  TimeSeries morphology;
  SimulationReport report;
};

/// Single neuron at the origin. `on_sample` runs at step 0 and after every
/// sample_every steps.
PyramidalRun run_pyramidal(const PyramidalParams& params, std::uint64_t seed, int threads = 1,
                           const std::function<void(const Simulation&, AgentId)>& on_sample = {});

ScenarioResult pyramidal_scenario(const RunOptions& options);

}  // namespace biosim
