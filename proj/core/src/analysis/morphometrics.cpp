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

#include "biosim/analysis/morphometrics.hpp"

namespace biosim {

Morphometrics morphometrics(const Simulation& sim, AgentId soma) {
  Morphometrics out;
  const auto& roots = sim.at(soma).data_as<SomaData>().roots;
  std::vector<AgentId> stack;
  for (AgentId root : roots) {
    ArborMetrics arbor;
    arbor.root = root;
    arbor.lineage = sim.at(root).data_as<NeuriteData>().lineage;
    stack.assign(1, root);
    while (!stack.empty()) {
      const Agent& e = sim.at(stack.back());
      stack.pop_back();
      const auto& d = e.data_as<NeuriteData>();
      ++arbor.elements;
      arbor.total_length += e.length();
      const int n = d.daughter_count();
      if (n == 2) ++arbor.branch_points;
      if (n == 0) ++arbor.terminals;
      for (AgentId c : d.daughters) {
        if (c.valid()) stack.push_back(c);
      }
    }
    out.branch_points += arbor.branch_points;
    out.total_length += arbor.total_length;
    out.arbors.push_back(arbor);
  }
  if (!out.arbors.empty()) {
    const double n = static_cast<double>(out.arbors.size());
    out.mean_branch_points = out.branch_points / n;
    out.mean_length = out.total_length / n;
  }
  return out;
}

}  // namespace biosim
