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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace biosim {

struct PsoConfig {
  using Objective = std::function<double(std::span<const double>)>;

  int swarm_size = 30;
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;
  std::vector<double> lower;
  std::vector<double> upper;
  int iterations = 100;
  std::uint64_t seed = 0;
  /// Positions for the first particles; the rest start uniformly at random.
  std::vector<std::vector<double>> initial_guesses;
  /// Particles evaluated concurrently. The objective must be thread-safe.
  int threads = 1;
  Objective objective;

  /// Throws std::invalid_argument for empty or non-finite bounds, lower >=
  /// upper, swarm size < 2, negative budget or a missing objective.
  void validate() const;
};

struct PsoIteration {
  int iteration = 0;
  std::vector<double> best;
  double best_loss = 0.0;
};

struct PsoResult {
  std::vector<double> best;
  double best_loss = 0.0;
  /// Global best after the initial swarm (iteration 0) and after every iteration.
  std::vector<PsoIteration> history;
  std::int64_t evaluations = 0;
};

/// Global-best particle swarm with inertia weight. Positions are clamped to
/// the bounds and non-finite losses count as +inf.
PsoResult pso_optimize(const PsoConfig& config);

/// `iteration,<x0..>,loss` rows.
void write_pso_history(std::ostream& out, const PsoResult& result);

}  // namespace biosim
