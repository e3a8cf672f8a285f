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

#include "biosim/scenarios/pyramidal.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace biosim {

const std::vector<std::string>& PyramidalParams::keys() {
  static const std::vector<std::string> k{
      "soma_diameter",   "apical_gradient", "apical_previous", "apical_random",
      "basal_gradient",  "basal_previous",  "basal_random",    "apical_speed",
      "p_apical",        "p_basal",         "apical_diameter", "basal_diameter",
      "apical_taper",    "basal_taper",     "max_element_length", "spring_constant",
      "branch_diameter_ratio", "min_diameter", "field_spacing", "apical_mean",
      "apical_sigma",    "basal_mean",      "basal_sigma",     "steps",
      "sample_every",    "dt"};
  return k;
}

PyramidalParams PyramidalParams::from(const ParamSet& params) { return from(params, PyramidalParams{}); }

PyramidalParams PyramidalParams::from(const ParamSet& ps, PyramidalParams p) {
  ps.check_known(keys(), "scenario pyramidal");
  p.soma_diameter = ps.get_double("soma_diameter", p.soma_diameter);
  p.apical.gradient = ps.get_double("apical_gradient", p.apical.gradient);
  p.apical.previous = ps.get_double("apical_previous", p.apical.previous);
  p.apical.random = ps.get_double("apical_random", p.apical.random);
  p.basal.gradient = ps.get_double("basal_gradient", p.basal.gradient);
  p.basal.previous = ps.get_double("basal_previous", p.basal.previous);
  p.basal.random = ps.get_double("basal_random", p.basal.random);
  p.apical_speed = ps.get_double("apical_speed", p.apical_speed);
  p.p_apical = ps.get_double("p_apical", p.p_apical);
  p.p_basal = ps.get_double("p_basal", p.p_basal);
  p.apical_diameter = ps.get_double("apical_diameter", p.apical_diameter);
  p.basal_diameter = ps.get_double("basal_diameter", p.basal_diameter);
  p.apical_taper = ps.get_double("apical_taper", p.apical_taper);
  p.basal_taper = ps.get_double("basal_taper", p.basal_taper);
  p.neuro.max_element_length = ps.get_double("max_element_length", p.neuro.max_element_length);
  p.neuro.spring_constant = ps.get_double("spring_constant", p.neuro.spring_constant);
  p.neuro.branch_diameter_ratio =
      ps.get_double("branch_diameter_ratio", p.neuro.branch_diameter_ratio);
  p.neuro.min_diameter = ps.get_double("min_diameter", p.neuro.min_diameter);
  p.field_spacing = ps.get_double("field_spacing", p.field_spacing);
  p.apical_mean = ps.get_double("apical_mean", p.apical_mean);
  p.apical_sigma = ps.get_double("apical_sigma", p.apical_sigma);
  p.basal_mean = ps.get_double("basal_mean", p.basal_mean);
  p.basal_sigma = ps.get_double("basal_sigma", p.basal_sigma);
  p.steps = ps.get_int("steps", p.steps);
  p.sample_every = ps.get_int("sample_every", p.sample_every);
  p.dt = ps.get_double("dt", p.dt);
  p.validate();
  return p;
}

void PyramidalParams::validate() const {
  for (const GrowthWeights* w : {&apical, &basal}) {
    if (w->gradient < 0.0 || w->previous < 0.0 || w->random < 0.0) {
      throw ConfigError("pyramidal: growth weights must be >= 0");
    }
  }
  for (double p : {p_apical, p_basal}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("pyramidal: branch probabilities must lie in [0, 1]");
  }
  if (!(apical_speed > 0.0) || !(soma_diameter > 0.0) || !(dt > 0.0)) {
    throw ConfigError("pyramidal: speed, soma diameter and dt must be > 0");
  }
  if (!(apical_diameter > neuro.min_diameter) || !(basal_diameter > neuro.min_diameter)) {
    throw ConfigError("pyramidal: initial diameters must exceed min_diameter");
  }
  if (apical_taper < 0.0 || basal_taper < 0.0) throw ConfigError("pyramidal: taper must be >= 0");
  if (!(field_spacing > 0.0) || !(apical_sigma > 0.0) || !(basal_sigma > 0.0)) {
    throw ConfigError("pyramidal: field spacing and sigmas must be > 0");
  }
  if (steps < 0 || sample_every < 1) throw ConfigError("pyramidal: steps >= 0, sample_every >= 1");
  neuro.validate();
}

Vec3 growth_direction(const GrowthWeights& w, const Vec3& gradient, const Vec3& previous,
                      const Vec3& random) {
  Vec3 dir = normalized(previous) * w.previous + normalized(random) * w.random;
  if (squared_norm(gradient) > 0.0) dir += normalized(gradient) * w.gradient;
  const Vec3 u = normalized(dir);
  return squared_norm(u) > 0.0 ? u : normalized(previous);
}

PyramidalFields install_pyramidal(Simulation& sim, const PyramidalParams& params) {
  params.validate();
  DiffusionSpec spec;
  spec.origin = params.field_min;
  spec.spacing = params.field_spacing;
  for (int a = 0; a < 3; ++a) {
    spec.dims[a] = static_cast<int>(
        std::floor((params.field_max[a] - params.field_min[a]) / params.field_spacing)) + 1;
  }
  spec.dt = sim.dt();
  PyramidalFields f;
  spec.name = "apical_growth_factor";
  f.apical = sim.add_field(spec);
  sim.field(f.apical).init_gaussian_axis(2, params.apical_mean, params.apical_sigma,
                                         params.field_amplitude);
  spec.name = "basal_growth_factor";
  f.basal = sim.add_field(spec);
  sim.field(f.basal).init_gaussian_axis(2, params.basal_mean, params.basal_sigma,
                                        params.field_amplitude);
  sim.add_operation(behaviors_op());
  sim.add_operation(diffusion_op());
  sim.add_operation(neurite_mechanics_op(params.neuro));
  return f;
}

Behavior pyramidal_growth_behavior(const PyramidalParams& params, const PyramidalFields& fields) {
  NeuroParams apical_neuro = params.neuro;
  apical_neuro.taper_rate = params.apical_taper;
  NeuroParams basal_neuro = params.neuro;
  basal_neuro.taper_rate = params.basal_taper;
  Behavior b("pyramidal growth", [=](Agent& agent, AgentContext& ctx) {
    auto* d = agent.data_if<NeuriteData>();
    if (d == nullptr || !d->terminal()) return;
    const bool apical = d->lineage == Lineage::kApical;
    const NeuroParams& np = apical ? apical_neuro : basal_neuro;
    if (agent.diameter <= np.min_diameter) return;

    SplitMix64& rng = ctx.rng();
    const Vec3 previous = normalized(agent.distal - agent.proximal);
    const bool may_branch = !apical || d->on_main_branch;
    if (may_branch) {
      ++d->branch_draws;
      if (bernoulli(rng, apical ? params.p_apical : params.p_basal)) {
        const Vec3 r = random_unit_vector(rng);
        Vec3 perp = normalized(r - previous * dot(r, previous));
        if (squared_norm(perp) == 0.0) perp = normalized(cross(previous, Vec3{1.0, 0.0, 0.0}));
        if (squared_norm(perp) == 0.0) perp = normalized(cross(previous, Vec3{0.0, 1.0, 0.0}));
        const double a = 0.3 + 0.7 * uniform01(rng);
        const double b = 0.3 + 0.7 * uniform01(rng);
        ctx.enqueue(bifurcation_event(agent.id(), previous + perp * a, previous - perp * b, np));
        return;
      }
    }
    const DiffusionGrid& field = ctx.field(apical ? fields.apical : fields.basal);
    const Vec3 gradient = field.gradient_at(agent.distal);
    const Vec3 dir = growth_direction(apical ? params.apical : params.basal, gradient, previous,
                                      random_unit_vector(rng));
    const double speed = apical ? params.apical_speed : params.basal_speed();
    if (elongate_terminal(agent, speed, ctx.dt(), dir, np)) {
      ctx.enqueue(neurite_split_event(agent.id()));
    }
  });
  b.copy_on(EventKind::kNeuriteExtension)
      .copy_on(EventKind::kNeuriteBifurcation)
      .copy_on(EventKind::kNeuriteSideBranch)
      .remove_on(EventKind::kNeuriteExtension)
      .remove_on(EventKind::kNeuriteBifurcation);
  return b;
}

AgentId add_pyramidal_neuron(Simulation& sim, const Vec3& position, const PyramidalParams& params,
                             const PyramidalFields& fields) {
  const AgentId soma = sim.add_agent(make_soma(position, params.soma_diameter));
  const Behavior growth = pyramidal_growth_behavior(params, fields);
  const AgentId apical = extend_new_neurite(sim, soma, {0.0, 0.0, 1.0}, params.apical_diameter,
                                            Lineage::kApical, true, params.neuro);
  sim.at(apical).add_behavior(growth);
  for (int k = 0; k < 3; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / 3.0;
    const Vec3 dir{std::cos(phi), std::sin(phi), -0.5};
    const AgentId root = extend_new_neurite(sim, soma, dir, params.basal_diameter,
                                            Lineage::kBasal, false, params.neuro);
    sim.at(root).add_behavior(growth);
  }
  return soma;
}

BranchBookkeeping branch_bookkeeping(const Simulation& sim, AgentId soma,
                                     const PyramidalParams& params) {
  BranchBookkeeping out;
  for (const Agent& a : sim.agents()) {
    const auto* d = a.data_if<NeuriteData>();
    if (d == nullptr || d->soma != soma) continue;
    (d->lineage == Lineage::kApical ? out.apical_draws : out.basal_draws) += d->branch_draws;
    if (d->daughter_count() == 2) ++out.branch_points;
  }
  const double pa = params.p_apical;
  const double pb = params.p_basal;
  out.expected = pa * out.apical_draws + pb * out.basal_draws;
  out.sigma = std::sqrt(pa * (1.0 - pa) * out.apical_draws + pb * (1.0 - pb) * out.basal_draws);
  return out;
}

namespace {

std::vector<double> morphology_row(const Simulation& sim, AgentId soma) {
  const Morphometrics m = morphometrics(sim, soma);
  double apical = 0.0;
  double basal = 0.0;
  int elements = 0;
  int terminals = 0;
  for (const auto& a : m.arbors) {
    (a.lineage == Lineage::kApical ? apical : basal) += a.total_length;
    elements += a.elements;
    terminals += a.terminals;
  }
  return {static_cast<double>(elements), static_cast<double>(terminals),
          static_cast<double>(m.branch_points), apical, basal, m.mean_branch_points,
          m.mean_length};
}

}  // namespace

PyramidalRun run_pyramidal(const PyramidalParams& params, std::uint64_t seed, int threads,
                           const std::function<void(const Simulation&, AgentId)>& on_sample) {
  params.validate();
  SimulationConfig cfg;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.dt = params.dt;
  PyramidalRun run;
  run.sim = std::make_unique<Simulation>(cfg);
  Simulation& sim = *run.sim;
  const PyramidalFields fields = install_pyramidal(sim, params);
  run.soma = add_pyramidal_neuron(sim, {0.0, 0.0, 0.0}, params, fields);
  run.morphology = TimeSeries({"elements", "terminals", "branch_points", "apical_length",
                               "basal_length", "mean_branch_points", "mean_arbor_length"});

  auto sample = [&] {
    run.morphology.append(sim.step(), morphology_row(sim, run.soma));
    if (on_sample) on_sample(sim, run.soma);
  };
  sample();
  std::int64_t done = 0;
  while (done < params.steps) {
    const std::int64_t chunk = std::min(params.sample_every, params.steps - done);
    const SimulationReport r = sim.simulate(chunk);
    run.report.births += r.births;
    run.report.deaths += r.deaths;
    run.report.wall_seconds += r.wall_seconds;
    run.report.timings = r.timings;
    done += chunk;
    sample();
  }
  run.report.steps = params.steps;
  run.report.final_step = sim.step();
  run.report.population = sim.population();
  return run;
}

ScenarioResult pyramidal_scenario(const RunOptions& options) {
  PyramidalParams params = PyramidalParams::from(options.params);
  if (options.steps >= 0) params.steps = options.steps;
  PyramidalRun run = run_pyramidal(params, options.seed, options.threads);
  ScenarioResult out;
  std::ostringstream swc;
  write_swc(swc, to_swc(*run.sim, run.soma));
  out.files.push_back({"neuron.swc", swc.str()});
  const BranchBookkeeping b = branch_bookkeeping(*run.sim, run.soma, params);
  const Morphometrics m = morphometrics(*run.sim, run.soma);
  out.summary = {{"branch_points", static_cast<double>(b.branch_points)},
                 {"expected_branch_points", b.expected},
                 {"branch_points_sigma", b.sigma},
                 {"total_length", m.total_length},
                 {"mean_arbor_length", m.mean_length}};
  for (std::size_t i = 0; i < run.morphology.size(); ++i) {
    out.population.emplace_back(run.morphology.steps()[i],
                                static_cast<std::size_t>(run.morphology.at(i, 0)) + 1);
  }
  out.report = run.report;
  out.series.emplace_back("morphometrics", std::move(run.morphology));
  return out;
}

}  // namespace biosim
