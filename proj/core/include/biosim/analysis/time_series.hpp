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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biosim/simulation.hpp"

namespace biosim {

/// Named scalar channels sampled at strictly increasing step indices.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> channels);

  const std::vector<std::string>& channels() const { return names_; }
  std::size_t channel_count() const { return names_.size(); }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  /// Throws std::invalid_argument on a width mismatch or a step that does
  /// not exceed the previous one.
  void append(std::int64_t step, std::span<const double> values);
  void append(std::int64_t step, std::initializer_list<double> values) {
    append(step, std::span<const double>(values.begin(), values.size()));
  }

  const std::vector<std::int64_t>& steps() const { return steps_; }
  std::span<const double> column(std::size_t channel) const { return columns_.at(channel); }
  std::span<const double> column(std::string_view name) const;
  std::size_t channel_index(std::string_view name) const;
  double at(std::size_t row, std::size_t channel) const { return columns_.at(channel).at(row); }

  /// Header `step,<channels>`, one row per sample, shortest round-trip
  /// number formatting.
  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::int64_t> steps_;
  std::vector<std::vector<double>> columns_;
};

using Sampler = std::function<std::vector<double>(const Simulation&)>;

/// Standalone operation appending sampler(sim) at the current step.
Operation record_op(std::string name, std::shared_ptr<TimeSeries> series, Sampler sampler,
                    int frequency = 1);

}  // namespace biosim
