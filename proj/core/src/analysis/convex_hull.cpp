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

#include "biosim/analysis/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "biosim/random.hpp"

namespace biosim {

namespace {

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

struct Face {
  std::array<std::size_t, 3> v;
  Vec3 normal;  // not normalized
  double offset = 0.0;
  bool alive = true;
};

Face make_face(const std::vector<Vec3>& pts, std::size_t a, std::size_t b, std::size_t c) {
  Face f;
  f.v = {a, b, c};
  f.normal = cross(pts[b] - pts[a], pts[c] - pts[a]);
  f.offset = dot(f.normal, pts[a]);
  return f;
}

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

double max_pairwise_distance(std::span<const Vec3> pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, squared_norm(pts[i] - pts[j]));
    }
  }
  return std::sqrt(best);
}

}  // namespace

ConvexHull convex_hull(std::span<const Vec3> input) {
  ConvexHull hull;
  std::vector<Vec3> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) {
    hull.vertices = pts;
    hull.degenerate = true;
    return hull;
  }

  // Work relative to the centroid for better conditioning.
  Vec3 centroid;
  for (const Vec3& p : pts) centroid += p;
  centroid = centroid / static_cast<double>(pts.size());
  double scale = 0.0;
  for (Vec3& p : pts) {
    p -= centroid;
    scale = std::max(scale, norm(p));
  }
  const double eps = 1e-12 * scale;

  // Initial tetrahedron from extreme points.
  std::size_t i0 = 0;
  std::size_t i1 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (squared_norm(pts[i] - pts[i0]) > squared_norm(pts[i1] - pts[i0])) i1 = i;
  }
  const Vec3 axis = normalized(pts[i1] - pts[i0]);
  std::size_t i2 = i0;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = norm(cross(pts[i] - pts[i0], axis));
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (best <= eps) {
    hull.vertices = pts;
    hull.degenerate = true;
    return hull;
  }
  const Vec3 plane = normalized(cross(pts[i1] - pts[i0], pts[i2] - pts[i0]));
  std::size_t i3 = i0;
  best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(dot(pts[i] - pts[i0], plane));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (best <= 1e-10 * scale) {
    hull.vertices = pts;
    hull.degenerate = true;
    return hull;
  }

  std::vector<Face> faces;
  const Vec3 inside = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    Face f = make_face(pts, a, b, c);
    if (dot(f.normal, inside) - f.offset > 0.0) f = make_face(pts, a, c, b);
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<std::size_t> order;
  order.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  }
  SplitMix64 rng(0x68756c6cULL);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> visible;
  std::unordered_set<std::uint64_t> visible_edges;
  for (std::size_t idx : order) {
    const Vec3& p = pts[idx];
    visible.clear();
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!faces[f].alive) continue;
      const double n = norm(faces[f].normal);
      if (dot(faces[f].normal, p) - faces[f].offset > eps * n) visible.push_back(f);
    }
    if (visible.empty()) continue;
    visible_edges.clear();
    for (std::size_t f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) visible_edges.insert(edge_key(v[e], v[(e + 1) % 3]));
    }
    for (std::size_t f : visible) {
      faces[f].alive = false;
      const auto v = faces[f].v;
      for (int e = 0; e < 3; ++e) {
        const std::size_t a = v[e];
        const std::size_t b = v[(e + 1) % 3];
        if (!visible_edges.contains(edge_key(b, a))) faces.push_back(make_face(pts, a, b, idx));
      }
    }
    if (faces.size() > 4 * (pts.size() + 16)) {
      std::erase_if(faces, [](const Face& f) { return !f.alive; });
    }
  }
  std::erase_if(faces, [](const Face& f) { return !f.alive; });

  std::unordered_map<std::size_t, std::size_t> remap;
  double six_volume = 0.0;
  for (const Face& f : faces) {
    six_volume += dot(pts[f.v[0]], cross(pts[f.v[1]], pts[f.v[2]]));
    std::array<std::size_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] = remap.try_emplace(f.v[k], hull.vertices.size());
      if (inserted) hull.vertices.push_back(pts[f.v[k]] + centroid);
      tri[k] = it->second;
    }
    hull.faces.push_back(tri);
  }
  hull.volume = six_volume / 6.0;
  return hull;
}

HullDiameter convex_hull_diameter(std::span<const Vec3> points) {
  const ConvexHull hull = convex_hull(points);
  HullDiameter out;
  if (hull.degenerate) {
    out.degenerate = true;
    out.diameter = max_pairwise_distance(hull.vertices);
    return out;
  }
  out.volume = hull.volume;
  out.diameter = std::cbrt(6.0 * hull.volume / std::numbers::pi);
  return out;
}

}  // namespace biosim
