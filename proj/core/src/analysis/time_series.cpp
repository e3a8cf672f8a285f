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

#include "biosim/analysis/time_series.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace biosim {

TimeSeries::TimeSeries(std::vector<std::string> channels)
    : names_(std::move(channels)), columns_(names_.size()) {}

void TimeSeries::append(std::int64_t step, std::span<const double> values) {
  if (values.size() != names_.size()) {
    throw std::invalid_argument(fmt::format("time series: expected {} values, got {}",
                                            names_.size(), values.size()));
  }
  if (!steps_.empty() && step <= steps_.back()) {
    throw std::invalid_argument(
        fmt::format("time series: step {} does not follow step {}", step, steps_.back()));
  }
  steps_.push_back(step);
  for (std::size_t c = 0; c < values.size(); ++c) columns_[c].push_back(values[c]);
}

std::size_t TimeSeries::channel_index(std::string_view name) const {
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (names_[c] == name) return c;
  }
  throw std::out_of_range(fmt::format("time series has no channel '{}'", name));
}

std::span<const double> TimeSeries::column(std::string_view name) const {
  return columns_[channel_index(name)];
}

void TimeSeries::write_csv(std::ostream& out) const {
  out << "step";
  for (const auto& n : names_) out << ',' << n;
  out << '\n';
  fmt::memory_buffer row;
  for (std::size_t r = 0; r < steps_.size(); ++r) {
    row.clear();
    fmt::format_to(std::back_inserter(row), "{}", steps_[r]);
    for (const auto& col : columns_) fmt::format_to(std::back_inserter(row), ",{}", col[r]);
    row.push_back('\n');
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void TimeSeries::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out);
}

Operation record_op(std::string name, std::shared_ptr<TimeSeries> series, Sampler sampler,
                    int frequency) {
  if (!series || !sampler) throw std::invalid_argument("record_op needs a series and a sampler");
  return Operation::standalone_op(
      std::move(name),
      [series = std::move(series), sampler = std::move(sampler)](Simulation& sim) {
        series->append(sim.step(), sampler(sim));
      },
      frequency);
}

}  // namespace biosim
