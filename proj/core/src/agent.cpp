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

#include "biosim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "biosim/event.hpp"

namespace biosim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kCellDivision:
      return "CellDivision";
    case EventKind::kNeuriteExtension:
      return "NeuriteExtension";
    case EventKind::kNeuriteBifurcation:
      return "NeuriteBifurcation";
    case EventKind::kNeuriteSideBranch:
      return "NeuriteSideBranch";
    case EventKind::kCustom:
      return "Custom";
  }
  return "?";
}

Agent Agent::sphere(const Vec3& position, double diameter) {
  Agent a;
  a.shape = Shape::kSphere;
  a.position = position;
  a.diameter = diameter;
  a.proximal = position;
  a.distal = position;
  return a;
}

Agent Agent::cylinder(const Vec3& proximal, const Vec3& distal, double diameter) {
  Agent a;
  a.shape = Shape::kCylinder;
  a.diameter = diameter;
  a.set_cylinder(proximal, distal);
  return a;
}

void Agent::set_cylinder(const Vec3& new_proximal, const Vec3& new_distal) {
  proximal = new_proximal;
  distal = new_distal;
  position = (new_proximal + new_distal) * 0.5;
}

double Agent::extent() const {
  return shape == Shape::kCylinder ? std::max(diameter, length()) : diameter;
}

double Agent::volume() const {
  if (shape == Shape::kCylinder) return std::numbers::pi / 4.0 * diameter * diameter * length();
  return std::numbers::pi / 6.0 * diameter * diameter * diameter;
}

void Agent::set_volume(double volume) {
  if (shape != Shape::kSphere) throw std::logic_error("set_volume is defined for spheres only");
  if (!(volume > 0.0)) throw std::invalid_argument("set_volume: volume must be > 0");
  diameter = std::cbrt(6.0 * volume / std::numbers::pi);
}

void Agent::validate() const {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw std::invalid_argument("agent diameter must be finite and > 0, got " +
                                std::to_string(diameter));
  }
  if (!is_finite(position)) throw std::invalid_argument("agent position must be finite");
  if (shape == Shape::kCylinder && (!is_finite(proximal) || !is_finite(distal))) {
    throw std::invalid_argument("cylinder endpoints must be finite");
  }
}

Agent divide_cell(Agent& mother, const CellDivision& division) {
  if (!mother.is_sphere()) throw std::invalid_argument("cell division requires a sphere");
  const double ratio = division.volume_ratio;
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("cell division volume ratio must lie in (0, 1), got " +
                                std::to_string(ratio));
  }
  const Vec3 axis = normalized(division.axis);
  if (squared_norm(axis) == 0.0 || !is_finite(axis)) {
    throw std::invalid_argument("cell division axis must be a finite non-zero vector");
  }

  const double volume = mother.volume();
  Agent daughter = mother;
  daughter.behaviors.clear();
  daughter.set_volume(volume * ratio);
  mother.set_volume(volume * (1.0 - ratio));

  // Touching spheres; the volume-weighted center stays where the mother was.
  const double separation = 0.5 * (mother.diameter + daughter.diameter);
  const Vec3 center = mother.position;
  daughter.position = center + axis * (separation * (1.0 - ratio));
  mother.position = center - axis * (separation * ratio);
  daughter.proximal = daughter.distal = daughter.position;
  mother.proximal = mother.distal = mother.position;
  return daughter;
}

}  // namespace biosim
