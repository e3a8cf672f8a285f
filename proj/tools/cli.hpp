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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace biosim::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct ScalingRow {
  int threads = 1;
  double median_seconds = 0.0;
  double speedup = 1.0;
  double efficiency = 1.0;
  std::size_t agents = 0;
  std::vector<double> samples;
};

/// Builds the benchmark afresh for every repetition and times simulate() only.
/// Speedup is relative to the 1-thread row, or to the first row without one.
std::vector<ScalingRow> measure_scaling(const std::string& name, int scale, std::int64_t steps,
                                        const std::vector<int>& threads, int repetitions,
                                        std::uint64_t seed);

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

/// Entry point without the program name. Returns the process exit code.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biosim::cli
