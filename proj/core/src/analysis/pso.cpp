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

#include "biosim/analysis/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "biosim/parallel.hpp"
#include "biosim/random.hpp"

namespace biosim {

void PsoConfig::validate() const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("pso: bounds must be non-empty and of equal length");
  }
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || !(lower[d] < upper[d])) {
      throw std::invalid_argument(fmt::format("pso: bad bounds in dimension {}", d));
    }
  }
  if (swarm_size < 2) throw std::invalid_argument("pso: swarm size must be >= 2");
  if (iterations < 0) throw std::invalid_argument("pso: iteration budget must be >= 0");
  if (!objective) throw std::invalid_argument("pso: no objective");
  for (const auto& g : initial_guesses) {
    if (g.size() != lower.size()) throw std::invalid_argument("pso: initial guess has wrong size");
  }
}

PsoResult pso_optimize(const PsoConfig& config) {
  config.validate();
  const std::size_t dims = config.lower.size();
  const auto n = static_cast<std::size_t>(config.swarm_size);
  SplitMix64 rng(mix_key(config.seed, 0x5053'4f00ULL));

  std::vector<std::vector<double>> x(n, std::vector<double>(dims));
  std::vector<std::vector<double>> v(n, std::vector<double>(dims));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double span = config.upper[d] - config.lower[d];
      x[p][d] = p < config.initial_guesses.size()
                    ? std::clamp(config.initial_guesses[p][d], config.lower[d], config.upper[d])
                    : config.lower[d] + uniform01(rng) * span;
      v[p][d] = (2.0 * uniform01(rng) - 1.0) * 0.1 * span;
    }
  }

  PsoResult result;
  std::vector<double> loss(n);
  auto evaluate = [&] {
    detail::parallel_for(n, config.threads, [&](std::size_t p) {
      const double f = config.objective(x[p]);
      loss[p] = std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    });
    result.evaluations += static_cast<std::int64_t>(n);
  };

  evaluate();
  std::vector<std::vector<double>> pbest = x;
  std::vector<double> pbest_loss = loss;
  std::size_t g = 0;
  for (std::size_t p = 1; p < n; ++p) {
    if (pbest_loss[p] < pbest_loss[g]) g = p;
  }
  std::vector<double> gbest = pbest[g];
  double gbest_loss = pbest_loss[g];
  result.history.push_back({0, gbest, gbest_loss});

  for (int it = 1; it <= config.iterations; ++it) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double span = config.upper[d] - config.lower[d];
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        double vel = config.inertia * v[p][d] + config.cognitive * r1 * (pbest[p][d] - x[p][d]) +
                     config.social * r2 * (gbest[d] - x[p][d]);
        vel = std::clamp(vel, -span, span);
        v[p][d] = vel;
        x[p][d] = std::clamp(x[p][d] + vel, config.lower[d], config.upper[d]);
      }
    }
    evaluate();
    for (std::size_t p = 0; p < n; ++p) {
      if (loss[p] < pbest_loss[p]) {
        pbest_loss[p] = loss[p];
        pbest[p] = x[p];
      }
      if (loss[p] < gbest_loss) {
        gbest_loss = loss[p];
        gbest = x[p];
      }
    }
    result.history.push_back({it, gbest, gbest_loss});
  }
  result.best = gbest;
  result.best_loss = gbest_loss;
  return result;
}

void write_pso_history(std::ostream& out, const PsoResult& result) {
  out << "iteration";
  for (std::size_t d = 0; d < result.best.size(); ++d) out << ",x" << d;
  out << ",loss\n";
  for (const auto& h : result.history) {
    out << h.iteration;
    for (double xd : h.best) out << fmt::format(",{}", xd);
    out << fmt::format(",{}\n", h.best_loss);
  }
}

}  // namespace biosim
