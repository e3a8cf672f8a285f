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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biosim/agent.hpp"
#include "biosim/event.hpp"
#include "biosim/mechanics.hpp"
#include "biosim/simulation.hpp"

namespace biosim {

enum class Lineage : std::uint8_t { kBasal, kApical };

/// SWC structure type codes.
inline constexpr int kSwcSoma = 1;
inline constexpr int kSwcBasal = 3;
inline constexpr int kSwcApical = 4;

struct NeuroParams {
  double max_element_length = 10.0;
  double spring_constant = 10.0;
  double branch_diameter_ratio = 0.7;
  double min_diameter = 0.5;
  /// Diameter lost per µm of elongation.
  double taper_rate = 0.0;
  double initial_length = 0.5;
  double viscosity = 1.0;
  double max_displacement = 3.0;

  void validate() const;
};

/// Payload of a soma agent.
struct SomaData {
  std::vector<AgentId> roots;
};

/// Payload of a neurite element (a cylinder agent). The element is a spring
/// whose point mass sits on its distal end.
struct NeuriteData {
  AgentId soma;
  AgentId mother;
  bool mother_is_soma = false;
  std::array<AgentId, 2> daughters{};
  double resting_length = 0.0;
  double spring_constant = 10.0;
  Lineage lineage = Lineage::kBasal;
  bool on_main_branch = false;
  /// Unit direction from the soma center to the attachment point (roots).
  Vec3 soma_anchor;
  /// Steps in which this element drew for a branch while eligible.
  std::int64_t branch_draws = 0;

  bool terminal() const { return !daughters[0].valid() && !daughters[1].valid(); }
  int daughter_count() const { return daughters[0].valid() + daughters[1].valid(); }
  bool has_free_slot() const { return !daughters[0].valid() || !daughters[1].valid(); }
};

bool is_soma(const Agent& agent);
bool is_neurite(const Agent& agent);

/// Creates a sphere agent carrying SomaData.
Agent make_soma(const Vec3& position, double diameter);

/// Event that grows a root element of params.initial_length out of the soma
/// surface along `direction`. Fires NeuriteExtension.
NewAgentEvent neurite_extension_event(AgentId soma, const Vec3& direction, double diameter,
                                      Lineage lineage, bool on_main_branch,
                                      const NeuroParams& params);

/// Applies neurite_extension_event right away; only valid outside a step.
/// Throws std::invalid_argument for a zero direction or a diameter at or below
/// the minimum.
AgentId extend_new_neurite(Simulation& sim, AgentId soma, const Vec3& direction,
                           double diameter, Lineage lineage, bool on_main_branch,
                           const NeuroParams& params);

/// Moves the distal end of a terminal element by speed*dt along `direction`
/// and tapers it. Resting length grows by the same amount as the actual
/// length. An element at the minimum diameter does not move. Returns true
/// when the element is now longer than the split threshold.
/// Throws std::logic_error for a non-terminal element.
bool elongate_terminal(Agent& element, double speed, double dt, const Vec3& direction,
                       const NeuroParams& params);

/// Splits an over-long element at its midpoint: the element keeps the
/// proximal half and a new terminal daughter takes the distal half.
/// Fires NeuriteExtension.
NewAgentEvent neurite_split_event(AgentId element);

/// Two daughters out of the distal end of a terminal element, diameter
/// scaled by the branch ratio. If the element is on the main branch, the
/// daughter whose direction is closest to the element axis stays on it.
/// Fires NeuriteBifurcation.
NewAgentEvent bifurcation_event(AgentId element, const Vec3& dir_a, const Vec3& dir_b,
                                const NeuroParams& params);

/// One daughter in the free slot of a non-terminal element.
/// Fires NeuriteSideBranch.
NewAgentEvent side_branch_event(AgentId element, const Vec3& direction,
                                const NeuroParams& params);

/// Applies bifurcation_event / side_branch_event right away.
std::vector<AgentId> branch_terminal(Simulation& sim, AgentId element, const Vec3& dir_a,
                                     const Vec3& dir_b, const NeuroParams& params);
AgentId side_branch(Simulation& sim, AgentId element, const Vec3& direction,
                    const NeuroParams& params);

/// Axial spring force k_s*(L - rest)/rest on the distal mass of ,
/// positive values meaning tension.
double spring_tension(const Agent& element);

/// Standalone operation: spring forces along every chain plus contact forces
/// from spheres other than the owning soma act on the distal point masses;
/// displacements are overdamped and clamped, then each proximal end is put
/// back onto its mother's distal end (or the soma surface).
Operation neurite_mechanics_op(NeuroParams params, MechanicsParams contact = {});

/// Runs one neurite mechanics pass immediately.
void apply_neurite_mechanics(Simulation& sim, const NeuroParams& params,
                             const MechanicsParams& contact);

/// Largest violation of the connectivity invariant over all elements, µm.
double max_connectivity_gap(const Simulation& sim);

/// Empty string when every tree rooted at a soma is a valid binary tree with
/// matching mother/daughter links, no orphans and a single main-branch path
/// per apical arbor; otherwise a description of the first problem.
std::string check_neuron_trees(const Simulation& sim);

struct SwcNode {
  int id = 0;
  int type = 0;
  Vec3 position;
  double radius = 0.0;
  int parent = -1;

  friend bool operator==(const SwcNode&, const SwcNode&) = default;
};

/// SWC rows for one neuron: the soma first, then its elements depth-first
/// with the distal point as the node position.
std::vector<SwcNode> to_swc(const Simulation& sim, AgentId soma);
void write_swc(std::ostream& out, const std::vector<SwcNode>& nodes);
/// Throws std::runtime_error with a line number on malformed input.
std::vector<SwcNode> read_swc(std::istream& in);

}  // namespace biosim
