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

#include "biosim/agent.hpp"
#include "biosim/simulation.hpp"
#include "biosim/uniform_grid.hpp"
#include "biosim/vec3.hpp"

namespace biosim {

struct MechanicsParams {
  double stiffness = 10.0;
  double adhesion = 4.0;
  double adhesion_range = 0.2;
  double viscosity = 1.0;
  double max_displacement = 3.0;
  /// Leave agents in stationary grid regions where they are.
  bool skip_stationary = false;

  /// Throws std::invalid_argument unless k > 0, eta > 0, max displacement > 0.
  void validate() const;
};

/// Force on the first body of a pair and the overlap it came from.
struct ContactForce {
  Vec3 force;
  double overlap = 0.0;
};

/// Linear spring contact with a short linear adhesion band.
///
/// delta = r_a + r_b - |p_a - p_b|. Overlap pushes apart with k*delta,
/// -range < delta <= 0 pulls together with k_adh*delta, anything further is
/// zero. Coincident centers push along a unit axis picked from the lower id;
/// the agent with the lower id goes the positive way.
ContactForce contact_force(const Vec3& pa, double ra, AgentId ida, const Vec3& pb, double rb,
                           AgentId idb, const MechanicsParams& params);

ContactForce sphere_sphere_force(const Agent& a, const Agent& b, const MechanicsParams& params);
ContactForce sphere_sphere_force(const GridEntry& a, const GridEntry& b,
                                 const MechanicsParams& params);

/// Closest point on the segment [p, q] to x. Zero-length segments give p.
Vec3 closest_point_on_segment(const Vec3& x, const Vec3& p, const Vec3& q);

/// Force on the sphere from a cylinder, by the sphere-sphere rule applied at
/// the closest point of the cylinder axis with the cylinder radius. The
/// reaction belongs to the cylinder's distal point mass.
ContactForce sphere_cylinder_force(const Vec3& center, double diameter, AgentId sphere,
                                   const Vec3& proximal, const Vec3& distal, double cyl_diameter,
                                   AgentId cylinder, const MechanicsParams& params);
ContactForce sphere_cylinder_force(const Agent& sphere, const Agent& cylinder,
                                   const MechanicsParams& params);

/// Overdamped step: F / eta * dt, shortened to the max displacement.
Vec3 displacement(const Vec3& force, double dt, const MechanicsParams& params);

/// Net contact force on a sphere from every neighbor within one box edge
/// of the step snapshot. Throws std::runtime_error on a non-finite pair force.
Vec3 net_sphere_force(const GridEntry& self, const UniformGrid& grid,
                      const MechanicsParams& params);

/// The "mechanical forces" agent operation. Acts on spheres only; neurite
/// elements are moved by the neurite mechanics operation. Neighbors are
/// read from the step snapshot, so the simulation's box margin should be at
/// least the adhesion range.
Operation mechanical_forces_op(MechanicsParams params = {});

/// Sum of k*delta^2/2 over overlapping sphere pairs.
double overlap_energy(std::span<const Agent> agents, const MechanicsParams& params);

}  // namespace biosim
