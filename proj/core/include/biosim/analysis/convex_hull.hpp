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
#include <cstddef>
#include <span>
#include <vector>

#include "biosim/vec3.hpp"

namespace biosim {

struct ConvexHull {
  /// Outward-oriented triangles as indices into `vertices`.
  std::vector<std::array<std::size_t, 3>> faces;
  std::vector<Vec3> vertices;
  double volume = 0.0;
  /// Set when fewer than 4 distinct or only coplanar points were given.
  bool degenerate = false;
};

/// Incremental 3-D hull. Input is sorted lexicographically and then visited
/// in a fixed pseudo-random order, so the result depends only on the point set.
ConvexHull convex_hull(std::span<const Vec3> points);

struct HullDiameter {
  double diameter = 0.0;
  double volume = 0.0;
  bool degenerate = false;
};

/// (6V/pi)^(1/3) of the hull. Degenerate sets return the largest pairwise
/// distance with the flag set.
HullDiameter convex_hull_diameter(std::span<const Vec3> points);

}  // namespace biosim
