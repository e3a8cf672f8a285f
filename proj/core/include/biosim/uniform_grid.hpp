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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "biosim/agent.hpp"

namespace biosim {

/// Snapshot of the neighbor-visible part of one agent, taken when the grid is
/// rebuilt. Agent operations read neighbors exclusively through these copies.
struct GridEntry {
  AgentId id;
  Shape shape = Shape::kSphere;
  int state = 0;
  Vec3 position;
  double diameter = 0.0;
  Vec3 proximal;
  Vec3 distal;
  /// Index of the agent in Simulation::agents() at snapshot time.
  std::size_t slot = 0;
};

using BoxCoord = std::array<int, 3>;

/// Uniform-grid environment: cubic boxes whose edge is at least the largest
/// agent extent, so every neighbor within one box edge lies in the 27 boxes
/// around an agent's own box.
///
/// The grid is rebuilt from scratch every step. Rebuilding also compares the
/// snapshot against the previous step's one and flags boxes where something moved,
/// grew, appeared or disappeared; regions whose 27 boxes are all unflagged
/// are stationary.
class UniformGrid {
 public:
  struct Options {
    /// Lower bound on the box edge (µm). Set it to the interaction radius
    /// when that exceeds the largest agent.
    double min_box_length = 0.0;
    /// Added to the largest agent extent, e.g. an adhesion range.
    double box_margin = 0.0;
    double move_epsilon = 1e-9;
    int threads = 1;
  };

  /// Upper bound on the number of boxes; a rebuild beyond it throws.
  static constexpr std::size_t kMaxBoxes = std::size_t{1} << 27;

  /// Rebuilds from `agents`. Change flags compare against the last snapshot
  /// taken with `advance_history`; only such rebuilds become the new
  /// reference, so refreshing the grid between steps does not hide motion.
  void rebuild(std::span<const Agent> agents, const Options& options, bool advance_history = true);

  /// Forgets the reference snapshot so that every box is reported as changed.
  void reset_history();

  double box_length() const { return box_length_; }
  const Vec3& origin() const { return origin_; }
  const BoxCoord& dimensions() const { return dims_; }
  std::size_t box_count() const { return box_start_.empty() ? 0 : box_start_.size() - 1; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const GridEntry> entries() const { return entries_; }
  std::span<const GridEntry> box(const BoxCoord& coord) const;

  const GridEntry* find(AgentId id) const {
    if (id.value >= entry_of_id_.size() || entry_of_id_[id.value] < 0) return nullptr;
    return &entries_[static_cast<std::size_t>(entry_of_id_[id.value])];
  }

  /// Box containing `position`, clamped into the grid.
  BoxCoord box_of(const Vec3& position) const;

  /// Visits every other agent whose center lies within `radius` of `center`.
  /// Throws std::invalid_argument when radius exceeds the box edge.
  template <class Visitor>
  void for_each_neighbor(const GridEntry& center, double radius, Visitor&& visit) const {
    check_radius(radius);
    const double r2 = radius * radius;
    for_each_box_around(box_of(center.position), [&](const GridEntry& e) {
      if (e.id != center.id && squared_norm(e.position - center.position) <= r2) visit(e);
    });
  }

  template <class Visitor>
  void for_each_neighbor(AgentId center, double radius, Visitor&& visit) const {
    const GridEntry* entry = find(center);
    if (entry == nullptr) {
      throw std::invalid_argument("for_each_neighbor: agent " + std::to_string(center.value) +
                                  " is not in the grid");
    }
    for_each_neighbor(*entry, radius, std::forward<Visitor>(visit));
  }

  /// Visits every agent whose center lies within `radius` of `point`.
  template <class Visitor>
  void for_each_within(const Vec3& point, double radius, Visitor&& visit) const {
    check_radius(radius);
    const double r2 = radius * radius;
    for_each_box_around(box_of(point), [&](const GridEntry& e) {
      if (squared_norm(e.position - point) <= r2) visit(e);
    });
  }

  /// True iff nothing in the box or its 26 surrounding boxes moved more than
  /// the move epsilon, changed size, or was created/removed since the
  /// reference snapshot.
  bool is_region_stationary(const BoxCoord& coord) const;
  bool is_stationary(const GridEntry& entry) const {
    return is_region_stationary(box_of(entry.position));
  }

  bool box_changed(const BoxCoord& coord) const;

  /// Number of boxes holding 0, 1, 2, ... agents.
  std::vector<std::size_t> occupancy_histogram() const;
  void write_occupancy_csv(std::ostream& out) const;

 private:
  std::size_t linear(const BoxCoord& c) const {
    return (static_cast<std::size_t>(c[2]) * static_cast<std::size_t>(dims_[1]) +
            static_cast<std::size_t>(c[1])) *
               static_cast<std::size_t>(dims_[0]) +
           static_cast<std::size_t>(c[0]);
  }

  void check_radius(double radius) const;

  template <class Visitor>
  void for_each_box_around(const BoxCoord& c, Visitor&& visit) const {
    if (entries_.empty()) return;
    for (int dz = -1; dz <= 1; ++dz) {
      const int z = c[2] + dz;
      if (z < 0 || z >= dims_[2]) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        const int y = c[1] + dy;
        if (y < 0 || y >= dims_[1]) continue;
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = c[0] + dx;
          if (x < 0 || x >= dims_[0]) continue;
          const std::size_t b = linear({x, y, z});
          for (std::uint32_t i = box_start_[b]; i < box_start_[b + 1]; ++i) visit(entries_[i]);
        }
      }
    }
  }

  double box_length_ = 1.0;
  Vec3 origin_;
  BoxCoord dims_{1, 1, 1};
  std::vector<GridEntry> entries_;
  std::vector<std::uint32_t> box_start_{0, 0};
  std::vector<std::int64_t> entry_of_id_;
  std::vector<std::uint8_t> changed_{1};
  std::vector<std::uint8_t> region_changed_{1};

  bool has_reference_ = false;
  std::vector<GridEntry> reference_entries_;
  std::vector<std::int64_t> reference_entry_of_id_;
};

}  // namespace biosim
