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
#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "biosim/vec3.hpp"

namespace biosim {

enum class Boundary {
  kClosed,     ///< zero flux through the lattice faces
  kAbsorbing,  ///< concentration is zero just outside the lattice
};

struct DiffusionSpec {
  std::string name;
  Vec3 origin;  ///< position of node (0, 0, 0)
  double spacing = 1.0;
  std::array<int, 3> dims{1, 1, 1};
  double diffusion = 0.0;  ///< µm² per simulated time unit
  double decay = 0.0;      ///< per simulated time unit
  Boundary boundary = Boundary::kClosed;
  double dt = 1.0;
  int threads = 1;
};

/// Substance concentration on a regular 3-D lattice, advanced with explicit
/// Euler and a 7-point Laplacian. Stable iff D·dt/h² <= 1/6; construction
/// rejects anything else.
class DiffusionGrid {
 public:
  static constexpr double kMaxStabilityNumber = 1.0 / 6.0;

  explicit DiffusionGrid(DiffusionSpec spec);

  const std::string& name() const { return spec_.name; }
  const DiffusionSpec& spec() const { return spec_; }
  double spacing() const { return spec_.spacing; }
  const std::array<int, 3>& dims() const { return spec_.dims; }
  std::size_t node_count() const { return values_.size(); }
  double stability_number() const;

  void set_threads(int threads) { spec_.threads = threads; }

  double value(int i, int j, int k) const { return values_[index(i, j, k)]; }
  void set_value(int i, int j, int k, double v) { values_[index(i, j, k)] = v; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  Vec3 node_position(int i, int j, int k) const;
  Vec3 upper_corner() const;

  void fill(double v);

  /// amplitude·exp(-(x_axis - mean)² / (2 sigma²)), uniform along the other
  /// two axes. Throws std::invalid_argument for sigma <= 0 or axis outside 0..2.
  void init_gaussian_axis(int axis, double mean, double sigma, double amplitude);

  /// One explicit-Euler step: c += dt·(D·∇²c − µ·c), clamped at zero.
  void step();

  /// Trilinear interpolation. Positions outside the lattice are clamped to
  /// it and counted in out_of_bounds_count().
  double concentration_at(const Vec3& position) const;

  /// Node gradients by central differences (one-sided on the faces),
  /// trilinearly interpolated.
  Vec3 gradient_at(const Vec3& position) const;

  /// Adds `amount` to the node nearest to `position` (as concentration
  /// amount/h³).
  void add_amount(const Vec3& position, double amount);

  /// Σ c·h³.
  double total_mass() const;
  double max_value() const;
  double min_value() const;

  std::size_t out_of_bounds_count() const { return out_of_bounds_->load(); }

  /// `x,y,z,value` with one row per node.
  void write_csv(std::ostream& out) const;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * static_cast<std::size_t>(spec_.dims[1]) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(spec_.dims[0]) +
           static_cast<std::size_t>(i);
  }
  /// Lattice cell containing `position` plus fractional offsets in [0, 1].
  void locate(const Vec3& position, std::array<int, 3>& cell, std::array<double, 3>& frac) const;
  Vec3 node_gradient(int i, int j, int k) const;

  DiffusionSpec spec_;
  std::vector<double> values_;
  std::vector<double> back_;
  std::unique_ptr<std::atomic<std::size_t>> out_of_bounds_;
};

}  // namespace biosim
