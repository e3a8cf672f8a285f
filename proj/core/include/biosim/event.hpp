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
#include <variant>

#include "biosim/agent.hpp"

namespace biosim {

/// Creates agents while an event is being applied. Every spawned agent
/// receives the parent's behaviors whose copy flag is set for the event kind.
class Spawner {
 public:
  virtual ~Spawner() = default;
  virtual AgentId spawn(Agent agent) = 0;
};

/// Splits the parent's volume: the daughter receives `volume_ratio` of it and
/// is placed along `axis` so that the two spheres touch. The volume-weighted
/// center of mass is preserved.
struct CellDivision {
  double volume_ratio = 0.5;
  Vec3 axis{1.0, 0.0, 0.0};
};

/// Event-specific geometry for kinds the core does not know about (neurite
/// growth, scenario extensions). May modify the parent and spawn agents;
/// must not touch any other agent.
using EventAction = std::function<void(Agent& parent, Spawner& spawner)>;

struct NewAgentEvent {
  EventKind kind = EventKind::kCustom;
  AgentId parent;
  std::variant<CellDivision, EventAction> parameters;

  static NewAgentEvent cell_division(AgentId parent, double volume_ratio, const Vec3& axis) {
    return {EventKind::kCellDivision, parent, CellDivision{volume_ratio, axis}};
  }
  static NewAgentEvent custom(EventKind kind, AgentId parent, EventAction action) {
    return {kind, parent, std::move(action)};
  }
};

/// Geometry of a division applied in place: shrinks `mother`, returns the
/// daughter (without id or behaviors). Throws std::invalid_argument for a
/// ratio outside (0, 1) or a non-sphere mother.
Agent divide_cell(Agent& mother, const CellDivision& division);

}  // namespace biosim
