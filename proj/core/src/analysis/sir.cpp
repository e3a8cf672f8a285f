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

#include "biosim/analysis/sir.hpp"

#include <cmath>
#include <stdexcept>

#include "biosim/parallel.hpp"

namespace biosim {

SirRates derive_rates(double r0, double recovery_days) {
  if (!(r0 > 0.0) || !(recovery_days > 0.0)) {
    throw std::invalid_argument("derive_rates: R0 and T_R must be > 0");
  }
  const double gamma = 1.0 / recovery_days;
  return {r0 * gamma, gamma};
}

void SirOdeParams::validate() const {
  if (beta < 0.0 || gamma < 0.0) throw std::invalid_argument("SIR ODE: beta, gamma must be >= 0");
  if (!(n > 0.0) || s0 < 0.0 || i0 < 0.0 || r0_init < 0.0) {
    throw std::invalid_argument("SIR ODE: N must be > 0 and compartments >= 0");
  }
  if (std::abs(s0 + i0 + r0_init - n) > 1e-9 * n) {
    throw std::invalid_argument("SIR ODE: S0 + I0 + R0 must equal N");
  }
}

namespace {

SirPoint derivative(const SirPoint& x, const SirOdeParams& p) {
  const double infection = p.beta * x.s * x.i / p.n;
  const double recovery = p.gamma * x.i;
  return {-infection, infection - recovery, recovery};
}

SirPoint axpy(const SirPoint& x, double a, const SirPoint& k) {
  return {x.s + a * k.s, x.i + a * k.i, x.r + a * k.r};
}

}  // namespace

SirPoint rk4_step(const SirPoint& x, const SirOdeParams& p, double dt) {
  const SirPoint k1 = derivative(x, p);
  const SirPoint k2 = derivative(axpy(x, 0.5 * dt, k1), p);
  const SirPoint k3 = derivative(axpy(x, 0.5 * dt, k2), p);
  const SirPoint k4 = derivative(axpy(x, dt, k3), p);
  const double w = dt / 6.0;
  return {x.s + w * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
          x.i + w * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i),
          x.r + w * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r)};
}

TimeSeries solve_sir_ode(const SirOdeParams& params, double t_end, double dt) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("solve_sir_ode: dt must be > 0");
  if (t_end < 0.0) throw std::invalid_argument("solve_sir_ode: t_end must be >= 0");
  TimeSeries out({"t", "S", "I", "R"});
  SirPoint x{params.s0, params.i0, params.r0_init};
  const auto steps = static_cast<std::int64_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
  out.append(0, {0.0, x.s, x.i, x.r});
  for (std::int64_t k = 1; k <= steps; ++k) {
    x = rk4_step(x, params, dt);
    out.append(k, {static_cast<double>(k) * dt, x.s, x.i, x.r});
  }
  return out;
}

std::vector<SirPoint> sir_ode_at(const SirOdeParams& params, std::span<const double> times,
                                 double dt) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("sir_ode_at: dt must be > 0");
  std::vector<SirPoint> out;
  out.reserve(times.size());
  SirPoint x{params.s0, params.i0, params.r0_init};
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw std::invalid_argument("sir_ode_at: times must be non-decreasing");
    const double span = target - t;
    const auto n = static_cast<std::int64_t>(std::ceil(span / dt - 1e-9));
    if (n > 0) {
      const double h = span / static_cast<double>(n);
      for (std::int64_t k = 0; k < n; ++k) x = rk4_step(x, params, h);
    }
    t = target;
    out.push_back(x);
  }
  return out;
}

double final_size(double r0, double s0_fraction) {
  if (!(r0 > 0.0)) throw std::invalid_argument("final_size: R0 must be > 0");
  if (!(s0_fraction > 0.0 && s0_fraction <= 1.0)) {
    throw std::invalid_argument("final_size: S0/N must lie in (0, 1]");
  }
  const auto f = [&](double x) { return std::log(x / s0_fraction) + r0 * (1.0 - x); };
  double hi = std::min(s0_fraction, 1.0 / r0);
  if (f(hi) <= 0.0) return s0_fraction;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::array<std::size_t, 3> count_sir(std::span<const Agent> agents, int threads) {
  const std::size_t workers = static_cast<std::size_t>(std::max(threads, 1));
  std::vector<std::array<std::size_t, 3>> partial(workers, {0, 0, 0});
  detail::parallel_chunks(agents.size(), threads, [&](std::size_t w, std::size_t i) {
    const int s = agents[i].state;
    if (s < kSusceptible || s > kRecovered) {
      throw std::runtime_error("agent " + std::to_string(agents[i].id().value) +
                               " has no SIR state");
    }
    ++partial[w][static_cast<std::size_t>(s)];
  });
  std::array<std::size_t, 3> total{0, 0, 0};
  for (const auto& p : partial) {
    for (std::size_t c = 0; c < 3; ++c) total[c] += p[c];
  }
  return total;
}

Operation count_sir_op(std::shared_ptr<TimeSeries> series, int frequency) {
  return record_op(
      "count sir", std::move(series),
      [](const Simulation& sim) {
        const auto c = count_sir(sim.agents(), sim.threads());
        return std::vector<double>{static_cast<double>(c[0]), static_cast<double>(c[1]),
                                   static_cast<double>(c[2])};
      },
      frequency);
}

}  // namespace biosim
