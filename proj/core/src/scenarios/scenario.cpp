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

#include "biosim/scenarios/scenario.hpp"

#include <stdexcept>

#include "biosim/scenarios/benchmarks.hpp"
#include "biosim/scenarios/pyramidal.hpp"
#include "biosim/scenarios/sir.hpp"
#include "biosim/scenarios/spheroid.hpp"

namespace biosim {

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry{
      {"pyramidal", "pyramidal neuron growing in two static growth-factor fields",
       PyramidalParams::keys(), pyramidal_scenario},
      {"spheroid", "tumor spheroid growth with convex-hull diameter per day",
       SpheroidParams::keys(), spheroid_scenario},
      {"sir", "spatial SIR epidemic in a reflecting cube", SirParams::keys(), sir_scenario},
      {"cell_growth_division", "lattice of growing and dividing cells", {"scale"},
       cell_growth_division_scenario},
      {"soma_clustering", "two cell types aggregating along their own substance", {"scale"},
       soma_clustering_scenario},
  };
  return registry;
}

std::string scenario_names() {
  std::string list;
  for (const auto& s : scenario_registry()) list += (list.empty() ? "" : ", ") + s.name;
  return list;
}

const ScenarioInfo& find_scenario(std::string_view name) {
  for (const auto& s : scenario_registry()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("unknown scenario '" + std::string(name) +
                          "' (registered: " + scenario_names() + ")");
}

}  // namespace biosim
