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
#include <memory>
#include <span>

#include "biosim/agent.hpp"
#include "biosim/analysis/time_series.hpp"

namespace biosim {

/// SIR compartment of an agent, stored in Agent::state.
enum SirState : int { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

struct SirRates {
  double beta = 0.0;
  double gamma = 0.0;
};

/// gamma = 1/T_R, beta = R0*gamma. Throws std::invalid_argument unless both are > 0.
SirRates derive_rates(double r0, double recovery_days);

struct SirOdeParams {
  double beta = 0.0;
  double gamma = 0.0;
  double n = 0.0;
  double s0 = 0.0;
  double i0 = 0.0;
  double r0_init = 0.0;

  void validate() const;
};

struct SirPoint {
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;
};

/// One classical Runge-Kutta step of the SIR system.
SirPoint rk4_step(const SirPoint& x, const SirOdeParams& p, double dt);

/// RK4 trajectory sampled at t = 0, dt, 2dt, ... up to t_end. Channels t, S, I, R;
/// the step index is the sample number.
TimeSeries solve_sir_ode(const SirOdeParams& params, double t_end, double dt);

/// S(t) etc. at exactly the given times (days), integrating with step dt
/// and landing on every requested time.
std::vector<SirPoint> sir_ode_at(const SirOdeParams& params, std::span<const double> times,
                                 double dt);

/// Fraction never infected: the root of ln(x/s0) = -R0*(1 - x) below
/// min(s0, 1/R0), found by bisection to 1e-12. Returns s0 when no epidemic
/// takes off.
double final_size(double r0, double s0_fraction);

/// Exact compartment counts of `agents` by Agent::state.
std::array<std::size_t, 3> count_sir(std::span<const Agent> agents, int threads = 1);

/// Standalone operation appending (S, I, R) to `series`.
Operation count_sir_op(std::shared_ptr<TimeSeries> series, int frequency = 1);

}  // namespace biosim
