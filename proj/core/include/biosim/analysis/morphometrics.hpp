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

#include <vector>

#include "biosim/neuro.hpp"
#include "biosim/simulation.hpp"

namespace biosim {

struct ArborMetrics {
  AgentId root;
  Lineage lineage = Lineage::kBasal;
  int elements = 0;
  int branch_points = 0;
  int terminals = 0;
  double total_length = 0.0;
};

struct Morphometrics {
  std::vector<ArborMetrics> arbors;
  int branch_points = 0;
  double total_length = 0.0;
  double mean_branch_points = 0.0;
  double mean_length = 0.0;
};

/// Branch points (elements with two daughters) and summed element lengths
/// for every arbor of `soma`, plus per-arbor averages.
Morphometrics morphometrics(const Simulation& sim, AgentId soma);

}  // namespace biosim
