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

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biosim/analysis/time_series.hpp"
#include "biosim/config.hpp"
#include "biosim/simulation.hpp"

namespace biosim {

struct RunOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  /// Scenario default when negative.
  std::int64_t steps = -1;
  ParamSet params;
};

struct TextArtifact {
  std::string file;
  std::string content;
};

/// Everything a scenario run produces. Series and artifacts are the primary
/// data; `summary` and `report` go to the manifest only.
struct ScenarioResult {
  std::vector<std::pair<std::string, TimeSeries>> series;
  std::vector<TextArtifact> files;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::pair<std::int64_t, std::size_t>> population;
  SimulationReport report;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::vector<std::string> parameters;
  std::function<ScenarioResult(const RunOptions&)> run;
};

const std::vector<ScenarioInfo>& scenario_registry();

/// Throws std::out_of_range listing the registered names.
const ScenarioInfo& find_scenario(std::string_view name);
std::string scenario_names();

}  // namespace biosim
