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

#include "biosim/scenarios/sir.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace biosim {

SirParams SirParams::for_disease(double r0, double recovery_days, int steps_per_day) {
  SirParams p;
  p.steps_per_day = steps_per_day;
  p.recovery_probability = derive_rates(r0, recovery_days).gamma / steps_per_day;
  return p;
}

const std::vector<std::string>& SirParams::keys() {
  static const std::vector<std::string> k{
      "susceptible",           "infected",  "cube",          "infection_radius",
      "infection_probability", "recovery_probability", "max_move", "steps_per_day",
      "days",                  "agent_diameter", "r0",     "recovery_days",
      "repetitions"};
  return k;
}

SirParams SirParams::from(const ParamSet& params) { return from(params, SirParams{}); }

SirParams SirParams::from(const ParamSet& params, SirParams defaults) {
  params.check_known(keys(), "scenario sir");
  SirParams p = defaults;
  p.steps_per_day = static_cast<int>(params.get_int("steps_per_day", p.steps_per_day));
  if (params.contains("r0") || params.contains("recovery_days")) {
    const double r0 = params.get_double("r0", 12.9);
    const double tr = params.get_double("recovery_days", 8.0);
    p.recovery_probability = derive_rates(r0, tr).gamma / p.steps_per_day;
  }
  p.susceptible = static_cast<int>(params.get_int("susceptible", p.susceptible));
  p.infected = static_cast<int>(params.get_int("infected", p.infected));
  p.cube = params.get_double("cube", p.cube);
  p.infection_radius = params.get_double("infection_radius", p.infection_radius);
  p.infection_probability = params.get_double("infection_probability", p.infection_probability);
  p.recovery_probability = params.get_double("recovery_probability", p.recovery_probability);
  p.max_move = params.get_double("max_move", p.max_move);
  p.days = params.get_double("days", p.days);
  p.agent_diameter = params.get_double("agent_diameter", p.agent_diameter);
  p.validate();
  return p;
}

std::int64_t SirParams::steps() const {
  return static_cast<std::int64_t>(std::llround(days * steps_per_day));
}

void SirParams::validate() const {
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("sir: {} must lie in [0, 1]", what));
  };
  prob(infection_probability, "infection_probability");
  prob(recovery_probability, "recovery_probability");
  if (susceptible < 0 || infected < 0) throw ConfigError("sir: counts must be >= 0");
  if (!(cube > 0.0) || !(infection_radius > 0.0) || max_move < 0.0 || !(agent_diameter > 0.0)) {
    throw ConfigError("sir: cube, infection_radius, agent_diameter must be > 0, max_move >= 0");
  }
  if (steps_per_day < 1 || days < 0.0) throw ConfigError("sir: steps_per_day >= 1, days >= 0");
}

double reflect_into(double x, double length) {
  const double period = 2.0 * length;
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  return y <= length ? y : period - y;
}

Behavior sir_behavior(const SirParams& params) {
  return Behavior("sir", [params](Agent& agent, AgentContext& ctx) {
    SplitMix64& rng = ctx.rng();
    if (agent.state == kInfected) {
      if (bernoulli(rng, params.recovery_probability)) agent.state = kRecovered;
    } else if (agent.state == kSusceptible) {
      bool exposed = false;
      if (const GridEntry* self = ctx.grid().find(agent.id())) {
        ctx.grid().for_each_neighbor(*self, params.infection_radius, [&](const GridEntry& e) {
          exposed = exposed || e.state == kInfected;
        });
      }
      if (exposed && bernoulli(rng, params.infection_probability)) agent.state = kInfected;
    }
    if (params.max_move > 0.0) {
      const Vec3 step = random_in_ball(rng, params.max_move);
      Vec3 p = agent.position + step;
      for (int a = 0; a < 3; ++a) p[a] = reflect_into(p[a], params.cube);
      agent.position = agent.proximal = agent.distal = p;
    }
  });
}

std::unique_ptr<Simulation> make_sir_simulation(const SirParams& params, std::uint64_t seed,
                                                int threads,
                                                std::shared_ptr<TimeSeries> counts) {
  params.validate();
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.min_box_length = params.infection_radius;
  auto sim = std::make_unique<Simulation>(cfg);
  SplitMix64 rng = sim->random().substream(~0ULL, 0, 0x5149);
  const Behavior behavior = sir_behavior(params);
  const int total = params.susceptible + params.infected;
  for (int i = 0; i < total; ++i) {
    const Vec3 p{uniform01(rng) * params.cube, uniform01(rng) * params.cube,
                 uniform01(rng) * params.cube};
    Agent a = Agent::sphere(p, params.agent_diameter);
    a.state = i < params.susceptible ? kSusceptible : kInfected;
    a.add_behavior(behavior);
    sim->add_agent(std::move(a));
  }
  if (counts) sim->add_operation(count_sir_op(counts));
  sim->add_operation(behaviors_op());
  return sim;
}

SirRun run_sir(const SirParams& params, std::uint64_t seed, int threads,
               const std::function<void(const Simulation&)>& observer) {
  auto counts = std::make_shared<TimeSeries>(std::vector<std::string>{"S", "I", "R"});
  auto sim = make_sir_simulation(params, seed, threads, counts);
  const std::int64_t steps = params.steps();
  SirRun run;
  if (observer) {
    for (std::int64_t s = 0; s < steps; ++s) {
      const SimulationReport r = sim->simulate(1);
      run.report.births += r.births;
      run.report.deaths += r.deaths;
      run.report.wall_seconds += r.wall_seconds;
      observer(*sim);
    }
    run.report.steps = steps;
    run.report.final_step = sim->step();
    run.report.population = sim->population();
  } else {
    run.report = sim->simulate(steps);
  }
  const auto c = count_sir(sim->agents(), threads);
  counts->append(sim->step(), {static_cast<double>(c[0]), static_cast<double>(c[1]),
                               static_cast<double>(c[2])});
  run.counts = std::move(*counts);
  return run;
}

SirComparison compare_sir_to_ode(const SirParams& params, double r0, double recovery_days,
                                 int repetitions, std::uint64_t seed, int threads) {
  if (repetitions < 1) throw std::invalid_argument("compare_sir_to_ode: repetitions must be >= 1");
  std::vector<TimeSeries> runs;
  runs.reserve(static_cast<std::size_t>(repetitions));
  for (int k = 0; k < repetitions; ++k) {
    runs.push_back(run_sir(params, seed + static_cast<std::uint64_t>(k), threads).counts);
  }
  const std::size_t rows = runs.front().size();
  const double n = params.susceptible + params.infected;

  std::vector<double> days(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    days[r] = static_cast<double>(runs.front().steps()[r]) / params.steps_per_day;
  }
  const SirRates rates = derive_rates(r0, recovery_days);
  SirOdeParams ode;
  ode.beta = rates.beta;
  ode.gamma = rates.gamma;
  ode.n = n;
  ode.s0 = params.susceptible;
  ode.i0 = params.infected;
  const std::vector<SirPoint> ref = sir_ode_at(ode, days, 0.01);

  SirComparison out;
  out.curves = TimeSeries({"day", "S", "I", "R", "S_ode", "I_ode", "R_ode"});
  std::array<double, 3> sq{};
  for (std::size_t r = 0; r < rows; ++r) {
    std::array<double, 3> mean{};
    for (const TimeSeries& run : runs) {
      for (std::size_t c = 0; c < 3; ++c) mean[c] += run.at(r, c);
    }
    for (double& m : mean) m /= repetitions;
    const std::array<double, 3> exact{ref[r].s, ref[r].i, ref[r].r};
    for (std::size_t c = 0; c < 3; ++c) sq[c] += (mean[c] - exact[c]) * (mean[c] - exact[c]);
    out.curves.append(runs.front().steps()[r],
                      {days[r], mean[0], mean[1], mean[2], exact[0], exact[1], exact[2]});
  }
  for (std::size_t c = 0; c < 3; ++c) out.rmse[c] = std::sqrt(sq[c] / static_cast<double>(rows));
  out.loss = (out.rmse[0] + out.rmse[1] + out.rmse[2]) / n;

  double final_s = 0.0;
  for (const TimeSeries& run : runs) final_s += run.at(rows - 1, 0);
  final_s /= repetitions;
  out.agent_attack = 1.0 - final_s / n;
  out.ode_attack = 1.0 - ref.back().s / n;
  out.final_size_attack = 1.0 - final_size(r0, params.susceptible / n);
  return out;
}

double well_mixed_radius(const SirParams& params, double r0, double recovery_days,
                         double probability) {
  const SirRates rates = derive_rates(r0, recovery_days);
  const double n = params.susceptible + params.infected;
  const double volume = params.cube * params.cube * params.cube;
  const double ball = rates.beta / params.steps_per_day * volume / (n * probability);
  return std::cbrt(3.0 * ball / (4.0 * std::numbers::pi));
}

SirCalibration calibrate_sir(const SirCalibrationSettings& settings) {
  SirParams base = settings.base;
  base.recovery_probability =
      derive_rates(settings.r0, settings.recovery_days).gamma / base.steps_per_day;
  base.validate();
  auto apply = [base](std::span<const double> x) {
    SirParams p = base;
    p.infection_radius = x[0];
    p.infection_probability = x[1];
    p.max_move = x[2];
    return p;
  };

  PsoConfig pso;
  pso.swarm_size = settings.particles;
  pso.iterations = settings.iterations;
  pso.lower = settings.lower;
  pso.upper = settings.upper;
  pso.seed = settings.seed;
  pso.threads = settings.threads;
  if (settings.warm_start) {
    const double move = settings.upper[2];
    for (double prob : {1.0, 0.5}) {
      const double r = well_mixed_radius(base, settings.r0, settings.recovery_days, prob);
      pso.initial_guesses.push_back({r, prob, move});
    }
  }
  pso.objective = [&](std::span<const double> x) {
    return compare_sir_to_ode(apply(x), settings.r0, settings.recovery_days,
                              settings.repetitions, settings.seed, 1)
        .loss;
  };
  SirCalibration out;
  out.pso = pso_optimize(pso);
  out.fitted = apply(out.pso.best);
  return out;
}

ScenarioResult sir_scenario(const RunOptions& options) {
  SirParams params = SirParams::from(options.params);
  if (options.steps >= 0) params.days = static_cast<double>(options.steps) / params.steps_per_day;
  const int repetitions = static_cast<int>(options.params.get_int("repetitions", 1));
  if (repetitions < 1) throw ConfigError("sir: repetitions must be >= 1");
  SirRun run = run_sir(params, options.seed, options.threads);
  ScenarioResult out;
  const auto& s = run.counts.column("S");
  const auto& r = run.counts.column("R");
  const double n = params.susceptible + params.infected;
  out.summary = {{"final_susceptible_fraction", s.back() / n},
                 {"final_recovered_fraction", r.back() / n},
                 {"steps_per_day", static_cast<double>(params.steps_per_day)}};
  for (std::size_t i = 0; i < run.counts.size(); ++i) {
    out.population.emplace_back(run.counts.steps()[i], static_cast<std::size_t>(n));
  }
  out.report = run.report;
  out.series.emplace_back("sir_counts", std::move(run.counts));

  // With disease targets, compare the repetition mean against the ODE.
  if (options.params.contains("r0") || options.params.contains("recovery_days")) {
    const double r0 = options.params.get_double("r0", 12.9);
    const double tr = options.params.get_double("recovery_days", 8.0);
    SirComparison cmp = compare_sir_to_ode(params, r0, tr, repetitions, options.seed, options.threads);
    out.summary.insert(out.summary.end(),
                       {{"repetitions", static_cast<double>(repetitions)},
                        {"rmse_S", cmp.rmse[0]},
                        {"rmse_I", cmp.rmse[1]},
                        {"rmse_R", cmp.rmse[2]},
                        {"agent_attack", cmp.agent_attack},
                        {"final_size_attack", cmp.final_size_attack},
                        {"loss", cmp.loss}});
    out.series.emplace_back("sir_mean_vs_ode", std::move(cmp.curves));
  }
  return out;
}

}  // namespace biosim
