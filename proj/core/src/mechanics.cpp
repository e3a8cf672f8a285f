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

#include "biosim/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace biosim {

void MechanicsParams::validate() const {
  if (!(stiffness > 0.0)) throw std::invalid_argument("mechanics: stiffness must be > 0");
  if (!(viscosity > 0.0)) throw std::invalid_argument("mechanics: viscosity must be > 0");
  if (!(max_displacement > 0.0)) {
    throw std::invalid_argument("mechanics: max displacement must be > 0");
  }
  if (adhesion < 0.0 || adhesion_range < 0.0) {
    throw std::invalid_argument("mechanics: adhesion and its range must be >= 0");
  }
}

ContactForce contact_force(const Vec3& pa, double ra, AgentId ida, const Vec3& pb, double rb,
                           AgentId idb, const MechanicsParams& params) {
  const Vec3 d = pa - pb;
  const double dist = norm(d);
  const double delta = ra + rb - dist;
  ContactForce out;
  out.overlap = delta;
  if (dist == 0.0) {
    const AgentId low = std::min(ida, idb);
    Vec3 axis;
    axis[static_cast<int>(low.value % 3)] = 1.0;
    if (ida != low) axis = -axis;
    out.force = axis * (params.stiffness * delta);
    return out;
  }
  const Vec3 u = d / dist;
  if (delta > 0.0) {
    out.force = u * (params.stiffness * delta);
  } else if (delta > -params.adhesion_range) {
    out.force = u * (params.adhesion * delta);
  }
  return out;
}

ContactForce sphere_sphere_force(const Agent& a, const Agent& b, const MechanicsParams& params) {
  return contact_force(a.position, 0.5 * a.diameter, a.id(), b.position, 0.5 * b.diameter, b.id(),
                       params);
}

ContactForce sphere_sphere_force(const GridEntry& a, const GridEntry& b,
                                 const MechanicsParams& params) {
  return contact_force(a.position, 0.5 * a.diameter, a.id, b.position, 0.5 * b.diameter, b.id,
                       params);
}

Vec3 closest_point_on_segment(const Vec3& x, const Vec3& p, const Vec3& q) {
  const Vec3 axis = q - p;
  const double len2 = squared_norm(axis);
  if (len2 == 0.0) return p;
  const double t = std::clamp(dot(x - p, axis) / len2, 0.0, 1.0);
  return p + axis * t;
}

ContactForce sphere_cylinder_force(const Vec3& center, double diameter, AgentId sphere,
                                   const Vec3& proximal, const Vec3& distal, double cyl_diameter,
                                   AgentId cylinder, const MechanicsParams& params) {
  const Vec3 c = closest_point_on_segment(center, proximal, distal);
  return contact_force(center, 0.5 * diameter, sphere, c, 0.5 * cyl_diameter, cylinder, params);
}

ContactForce sphere_cylinder_force(const Agent& sphere, const Agent& cylinder,
                                   const MechanicsParams& params) {
  return sphere_cylinder_force(sphere.position, sphere.diameter, sphere.id(), cylinder.proximal,
                               cylinder.distal, cylinder.diameter, cylinder.id(), params);
}

Vec3 displacement(const Vec3& force, double dt, const MechanicsParams& params) {
  Vec3 dp = force * (dt / params.viscosity);
  const double n = norm(dp);
  if (n > params.max_displacement) dp *= params.max_displacement / n;
  return dp;
}

Vec3 net_sphere_force(const GridEntry& self, const UniformGrid& grid,
                      const MechanicsParams& params) {
  Vec3 total;
  grid.for_each_neighbor(self, grid.box_length(), [&](const GridEntry& other) {
    ContactForce f;
    if (other.shape == Shape::kSphere) {
      f = sphere_sphere_force(self, other, params);
    } else {
      f = sphere_cylinder_force(self.position, self.diameter, self.id, other.proximal,
                                other.distal, other.diameter, other.id, params);
    }
    if (!is_finite(f.force)) {
      throw std::runtime_error("non-finite contact force between agents " +
                               std::to_string(self.id.value) + " and " +
                               std::to_string(other.id.value));
    }
    total += f.force;
  });
  return total;
}

Operation mechanical_forces_op(MechanicsParams params) {
  params.validate();
  return Operation::agent_op("mechanical forces", [params](Agent& agent, AgentContext& ctx) {
    if (!agent.is_sphere()) return;
    const UniformGrid& grid = ctx.grid();
    const GridEntry* self = grid.find(agent.id());
    if (self == nullptr) return;
    if (params.skip_stationary && grid.is_stationary(*self)) return;
    const Vec3 f = net_sphere_force(*self, grid, params);
    agent.position += displacement(f, ctx.dt(), params);
    agent.proximal = agent.distal = agent.position;
  });
}

double overlap_energy(std::span<const Agent> agents, const MechanicsParams& params) {
  double e = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!agents[i].is_sphere()) continue;
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      if (!agents[j].is_sphere()) continue;
      const double delta = 0.5 * (agents[i].diameter + agents[j].diameter) -
                           distance(agents[i].position, agents[j].position);
      if (delta > 0.0) e += 0.5 * params.stiffness * delta * delta;
    }
  }
  return e;
}

}  // namespace biosim
