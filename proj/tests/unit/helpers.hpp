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

#include <algorithm>
#include <vector>

#include "biosim/random.hpp"
#include "biosim/simulation.hpp"

namespace biosim::testing {

inline std::vector<Agent> random_spheres(std::size_t n, double side, double diameter,
                                         std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Agent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Agent::sphere({side * uniform01(rng), side * uniform01(rng), side * uniform01(rng)},
                                diameter));
  }
  return out;
}

/// Ids of all agents within `radius` of agent `i`, by exhaustive comparison.
inline std::vector<std::uint64_t> brute_neighbors(std::span<const Agent> agents, std::size_t i,
                                                  double radius) {
  std::vector<std::uint64_t> ids;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    if (j != i && squared_norm(agents[j].position - agents[i].position) <= radius * radius) {
      ids.push_back(agents[j].id().value);
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace biosim::testing
