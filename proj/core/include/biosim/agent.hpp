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

#include <any>
#include <bitset>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "biosim/vec3.hpp"

namespace biosim {

/// Stable agent handle. Ids are handed out in increasing order and never reused.
struct AgentId {
  static constexpr std::uint64_t kInvalidValue = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t value = kInvalidValue;

  constexpr bool valid() const { return value != kInvalidValue; }
  friend constexpr auto operator<=>(const AgentId&, const AgentId&) = default;
};

enum class Shape : std::uint8_t { kSphere, kCylinder };

/// Kinds of agent-creation events. Behaviors carry one copy flag and one
/// remove flag per kind.
enum class EventKind : std::uint8_t {
  kCellDivision,
  kNeuriteExtension,
  kNeuriteBifurcation,
  kNeuriteSideBranch,
  kCustom,
};
inline constexpr std::size_t kEventKindCount = 5;

const char* to_string(EventKind kind);

class Agent;
class AgentContext;

/// A per-agent rule executed every time the behavior operation runs.
///
/// Propagation across creation events is governed entirely by the flags: on
/// an event of kind K the new agent receives a copy iff copies_on(K), and the
/// parent drops it iff removed_on(K).
class Behavior {
 public:
  using Rule = std::function<void(Agent&, AgentContext&)>;

  Behavior(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  const std::string& name() const { return name_; }
  void run(Agent& agent, AgentContext& ctx) const { rule_(agent, ctx); }

  Behavior& copy_on(EventKind kind, bool enabled = true) {
    copy_.set(static_cast<std::size_t>(kind), enabled);
    return *this;
  }
  Behavior& remove_on(EventKind kind, bool enabled = true) {
    remove_.set(static_cast<std::size_t>(kind), enabled);
    return *this;
  }
  bool copies_on(EventKind kind) const { return copy_.test(static_cast<std::size_t>(kind)); }
  bool removed_on(EventKind kind) const { return remove_.test(static_cast<std::size_t>(kind)); }

 private:
  std::string name_;
  Rule rule_;
  std::bitset<kEventKindCount> copy_;
  std::bitset<kEventKindCount> remove_;
};

/// Spherical or cylindrical simulation entity.
///
/// `position` is the center of mass. For cylinders it is kept at the midpoint
/// of `proximal`/`distal` by set_cylinder(). `state` is a small scenario-defined
/// code that neighbors can read from the step snapshot (cell type, SIR
/// compartment); anything private to the agent goes into `data`.
class Agent {
 public:
  Agent() = default;

  static Agent sphere(const Vec3& position, double diameter);
  static Agent cylinder(const Vec3& proximal, const Vec3& distal, double diameter);

  AgentId id() const { return id_; }

  Shape shape = Shape::kSphere;
  Vec3 position;
  double diameter = 1.0;
  Vec3 proximal;
  Vec3 distal;
  int state = 0;
  std::vector<Behavior> behaviors;
  std::any data;

  bool is_sphere() const { return shape == Shape::kSphere; }
  bool is_cylinder() const { return shape == Shape::kCylinder; }

  void set_cylinder(const Vec3& new_proximal, const Vec3& new_distal);
  double length() const { return shape == Shape::kCylinder ? distance(proximal, distal) : 0.0; }

  /// Largest linear size; the uniform grid sizes its boxes from this.
  double extent() const;

  double volume() const;
  void set_volume(double volume);

  Agent& add_behavior(Behavior behavior) {
    behaviors.push_back(std::move(behavior));
    return *this;
  }

  template <class T>
  T& data_as() {
    return std::any_cast<T&>(data);
  }
  template <class T>
  const T& data_as() const {
    return std::any_cast<const T&>(data);
  }
  template <class T>
  T* data_if() {
    return std::any_cast<T>(&data);
  }
  template <class T>
  const T* data_if() const {
    return std::any_cast<T>(&data);
  }

  /// Throws std::invalid_argument when the geometry is not admissible.
  void validate() const;

 private:
  friend class Simulation;
  AgentId id_;
};

}  // namespace biosim

template <>
struct std::hash<biosim::AgentId> {
  std::size_t operator()(const biosim::AgentId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
