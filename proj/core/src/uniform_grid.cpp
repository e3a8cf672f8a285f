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

#include "biosim/uniform_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "biosim/parallel.hpp"

namespace biosim {
namespace {

GridEntry snapshot_of(const Agent& agent, std::size_t slot) {
  GridEntry e;
  e.id = agent.id();
  e.shape = agent.shape;
  e.state = agent.state;
  e.position = agent.position;
  e.diameter = agent.diameter;
  e.proximal = agent.proximal;
  e.distal = agent.distal;
  e.slot = slot;
  return e;
}

bool differs(const GridEntry& a, const GridEntry& b, double eps) {
  if (a.shape != b.shape) return true;
  if (distance(a.position, b.position) > eps) return true;
  if (std::abs(a.diameter - b.diameter) > eps) return true;
  if (a.shape == Shape::kCylinder) {
    return distance(a.proximal, b.proximal) > eps || distance(a.distal, b.distal) > eps;
  }
  return false;
}

}  // namespace

void UniformGrid::reset_history() {
  has_reference_ = false;
  reference_entries_.clear();
  reference_entry_of_id_.clear();
}

void UniformGrid::rebuild(std::span<const Agent> agents, const Options& options,
                          bool advance_history) {
  const int threads = std::max(1, options.threads);
  const std::size_t n = agents.size();
  const bool compare = has_reference_;

  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};
  double largest = 0.0;
  std::uint64_t max_id = 0;
  if (n > 0) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    lo = {inf, inf, inf};
    hi = {-inf, -inf, -inf};
    for (const Agent& a : agents) {
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], a.position[k]);
        hi[k] = std::max(hi[k], a.position[k]);
      }
      largest = std::max(largest, a.extent());
      max_id = std::max(max_id, a.id().value);
    }
  }

  box_length_ = std::max(largest + options.box_margin, options.min_box_length);
  if (!(box_length_ > 0.0)) box_length_ = 1.0;
  origin_ = lo;
  std::size_t total = 1;
  for (int k = 0; k < 3; ++k) {
    const double span = hi[k] - lo[k];
    const double cells = std::floor(span / box_length_) + 1.0;
    if (!(cells < static_cast<double>(kMaxBoxes))) {
      throw std::runtime_error("uniform grid: agent bounding box too large for box length " +
                               std::to_string(box_length_));
    }
    dims_[k] = static_cast<int>(cells);
    total *= static_cast<std::size_t>(dims_[k]);
    if (total > kMaxBoxes) {
      throw std::runtime_error("uniform grid: more than 2^27 boxes; agents are too spread out");
    }
  }

  // Box of every agent.
  std::vector<std::uint32_t> box_of_agent(n);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    box_of_agent[i] = static_cast<std::uint32_t>(linear(box_of(agents[i].position)));
  });

  // Counting sort with per-worker histograms. Offsets are assigned box-major,
  // worker-minor, so the final order equals a serial stable sort by box.
  const auto chunks = detail::static_chunks(n, threads);
  const std::size_t workers = chunks.size();
  std::vector<std::vector<std::uint32_t>> counts(workers, std::vector<std::uint32_t>(total, 0));
  detail::parallel_for(workers, threads, [&](std::size_t w) {
    for (std::size_t i = chunks[w].first; i < chunks[w].second; ++i) ++counts[w][box_of_agent[i]];
  });
  box_start_.assign(total + 1, 0);
  std::uint32_t running = 0;
  for (std::size_t b = 0; b < total; ++b) {
    box_start_[b] = running;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::uint32_t c = counts[w][b];
      counts[w][b] = running;
      running += c;
    }
  }
  box_start_[total] = running;

  entries_.resize(n);
  detail::parallel_for(workers, threads, [&](std::size_t w) {
    for (std::size_t i = chunks[w].first; i < chunks[w].second; ++i) {
      entries_[counts[w][box_of_agent[i]]++] = snapshot_of(agents[i], i);
    }
  });

  entry_of_id_.assign(n > 0 ? max_id + 1 : 0, -1);
  for (std::size_t i = 0; i < n; ++i) {
    entry_of_id_[entries_[i].id.value] = static_cast<std::int64_t>(i);
  }

  // Change flags against the previous snapshot.
  changed_.assign(total, compare ? 0 : 1);
  if (compare) {
    const double eps = options.move_epsilon;
    for (std::size_t i = 0; i < n; ++i) {
      const GridEntry& e = entries_[i];
      const std::uint64_t id = e.id.value;
      const bool existed =
          id < reference_entry_of_id_.size() && reference_entry_of_id_[id] >= 0;
      if (!existed) {
        changed_[linear(box_of(e.position))] = 1;
        continue;
      }
      const GridEntry& old = reference_entries_[static_cast<std::size_t>(reference_entry_of_id_[id])];
      if (differs(e, old, eps)) {
        changed_[linear(box_of(e.position))] = 1;
        changed_[linear(box_of(old.position))] = 1;
      }
    }
    for (const GridEntry& old : reference_entries_) {
      if (find(old.id) == nullptr) changed_[linear(box_of(old.position))] = 1;
    }
  }

  region_changed_.assign(total, compare ? 0 : 1);
  if (compare) {
    const std::size_t nx = static_cast<std::size_t>(dims_[0]);
    const std::size_t ny = static_cast<std::size_t>(dims_[1]);
    for (std::size_t b = 0; b < total; ++b) {
      if (!changed_[b]) continue;
      const int x = static_cast<int>(b % nx);
      const int y = static_cast<int>((b / nx) % ny);
      const int z = static_cast<int>(b / (nx * ny));
      for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const BoxCoord c{x + dx, y + dy, z + dz};
            if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[0] >= dims_[0] || c[1] >= dims_[1] ||
                c[2] >= dims_[2]) {
              continue;
            }
            region_changed_[linear(c)] = 1;
          }
        }
      }
    }
  }

  if (advance_history) {
    reference_entries_ = entries_;
    reference_entry_of_id_ = entry_of_id_;
    has_reference_ = true;
  }
}

std::span<const GridEntry> UniformGrid::box(const BoxCoord& coord) const {
  for (int k = 0; k < 3; ++k) {
    if (coord[k] < 0 || coord[k] >= dims_[k]) return {};
  }
  const std::size_t b = linear(coord);
  return std::span<const GridEntry>(entries_).subspan(box_start_[b], box_start_[b + 1] - box_start_[b]);
}

BoxCoord UniformGrid::box_of(const Vec3& position) const {
  BoxCoord c{};
  for (int k = 0; k < 3; ++k) {
    const double f = std::floor((position[k] - origin_[k]) / box_length_);
    c[k] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(dims_[k] - 1)));
  }
  return c;
}

void UniformGrid::check_radius(double radius) const {
  if (!(radius > 0.0)) throw std::invalid_argument("neighbor query radius must be positive");
  if (radius > box_length_) {
    throw std::invalid_argument("neighbor query radius " + std::to_string(radius) +
                                " exceeds the grid box edge " + std::to_string(box_length_) +
                                "; rebuild the grid with min_box_length >= radius");
  }
}

bool UniformGrid::is_region_stationary(const BoxCoord& coord) const {
  for (int k = 0; k < 3; ++k) {
    if (coord[k] < 0 || coord[k] >= dims_[k]) return true;
  }
  return region_changed_[linear(coord)] == 0;
}

bool UniformGrid::box_changed(const BoxCoord& coord) const {
  for (int k = 0; k < 3; ++k) {
    if (coord[k] < 0 || coord[k] >= dims_[k]) return false;
  }
  return changed_[linear(coord)] != 0;
}

std::vector<std::size_t> UniformGrid::occupancy_histogram() const {
  std::vector<std::size_t> histogram;
  for (std::size_t b = 0; b + 1 < box_start_.size(); ++b) {
    const std::size_t c = box_start_[b + 1] - box_start_[b];
    if (histogram.size() <= c) histogram.resize(c + 1, 0);
    ++histogram[c];
  }
  return histogram;
}

void UniformGrid::write_occupancy_csv(std::ostream& out) const {
  out << "occupancy,boxes\n";
  const auto histogram = occupancy_histogram();
  for (std::size_t c = 0; c < histogram.size(); ++c) out << c << ',' << histogram[c] << '\n';
}

}  // namespace biosim
