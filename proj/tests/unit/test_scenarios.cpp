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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "biosim/analysis/sir.hpp"
#include "biosim/neuro.hpp"
#include "biosim/scenarios/benchmarks.hpp"
#include "biosim/scenarios/pyramidal.hpp"
#include "biosim/scenarios/scenario.hpp"
#include "biosim/scenarios/sir.hpp"
#include "biosim/scenarios/spheroid.hpp"

using namespace biosim;

namespace {

/// Susceptible/infected pairs at unit distance on a coarse lattice; returns
/// the fraction of susceptibles infected after one step.
double pair_infection_rate(double probability, int pairs, bool with_infected = true) {
  SirParams p;
  p.infection_probability = probability;
  p.recovery_probability = 0.0;
  p.max_move = 0.0;
  p.infection_radius = 3.6;
  const int side = static_cast<int>(std::ceil(std::cbrt(pairs)));
  p.cube = 10.0 * side + 10.0;
  SimulationConfig cfg;
  cfg.seed = 5;
  cfg.min_box_length = p.infection_radius;
  Simulation sim(cfg);
  const Behavior b = sir_behavior(p);
  for (int n = 0; n < pairs; ++n) {
    const Vec3 at{5.0 + 10.0 * (n % side), 5.0 + 10.0 * ((n / side) % side), 5.0 + 10.0 * (n / (side * side))};
    Agent s = Agent::sphere(at, 1.0);
    s.state = kSusceptible;
    s.add_behavior(b);
    sim.add_agent(std::move(s));
    Agent i = Agent::sphere(at + Vec3{1.0, 0, 0}, 1.0);
    i.state = with_infected ? kInfected : kRecovered;
    i.add_behavior(b);
    sim.add_agent(std::move(i));
  }
  sim.add_operation(behaviors_op());
  sim.simulate(1);
  int infected = 0;
  for (std::size_t k = 0; k < sim.population(); k += 2) infected += sim.agents()[k].state == kInfected;
  return static_cast<double>(infected) / pairs;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("growth direction") {
  const Vec3 prev{0.6, 0.8, 0.0};
  const Vec3 d = growth_direction({0.0, 1.0, 0.0}, {0, 0, 5}, prev, {1, 0, 0});
  CHECK(distance(d, prev) < 1e-15);
  const Vec3 no_grad = growth_direction({0.5, 0.5, 0.0}, {0, 0, 0}, {0, 0, 2}, {1, 0, 0});
  CHECK(no_grad == Vec3{0, 0, 1});
  const Vec3 mixed = growth_direction({1.0, 1.0, 0.0}, {0, 0, 3}, {1, 0, 0}, {0, 1, 0});
  CHECK(mixed.x == doctest::Approx(std::sqrt(0.5)));
  CHECK(mixed.z == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("off-main apical elements never branch") {
  PyramidalParams p;
  p.steps = 60;
  p.p_apical = 1.0;
  p.p_basal = 0.0;
  const PyramidalRun run = run_pyramidal(p, 3);
  int apical_branch_points = 0;
  for (const Agent& a : run.sim->agents()) {
    const auto* d = a.data_if<NeuriteData>();
    if (d == nullptr) continue;
    if (d->lineage == Lineage::kBasal) CHECK(d->daughter_count() < 2);
    if (d->daughter_count() == 2) {
      CHECK(d->on_main_branch);
      ++apical_branch_points;
    }
    if (d->lineage == Lineage::kApical && !d->on_main_branch) CHECK(d->branch_draws == 0);
  }
  CHECK(apical_branch_points > 0);
  CHECK(check_neuron_trees(*run.sim).empty());
}

TEST_CASE("pyramidal neuron at default settings") {
  PyramidalParams p;
  const PyramidalRun run = run_pyramidal(p, 17);
  CHECK(check_neuron_trees(*run.sim).empty());
  const BranchBookkeeping b = branch_bookkeeping(*run.sim, run.soma, p);
  CHECK(b.apical_draws > 0);
  CHECK(b.basal_draws > 0);
  CHECK(std::abs(b.branch_points - b.expected) <= 3.0 * b.sigma);
  CHECK(b.expected == doctest::Approx(p.p_apical * b.apical_draws + p.p_basal * b.basal_draws));
  const auto apical = run.morphology.column("apical_length");
  const auto basal = run.morphology.column("basal_length");
  CHECK(apical.back() > 100.0);
  CHECK(basal.back() > 100.0);
  CHECK(run.morphology.size() == 11);
}

TEST_CASE("spheroid cell rules") {
  SpheroidParams p;
  p.doubling_days = std::numeric_limits<double>::infinity();
  p.brownian_sigma = 0.0;
  p.apoptosis_probability = 0.0;
  Simulation sim;
  Agent cell = Agent::sphere({1, 2, 3}, 12.0);
  cell.add_behavior(spheroid_cell_behavior(p));
  const AgentId id = sim.add_agent(cell);
  Agent ripe = Agent::sphere({100, 0, 0}, p.division_diameter);
  ripe.add_behavior(spheroid_cell_behavior(p));
  const AgentId rid = sim.add_agent(ripe);
  const double ripe_volume = sim.at(rid).volume();
  sim.add_operation(behaviors_op());
  sim.simulate(1);
  CHECK(sim.at(id).position == Vec3{1, 2, 3});
  CHECK(sim.at(id).diameter == 12.0);
  REQUIRE(sim.population() == 3);
  const double total = sim.agents()[1].volume() + sim.agents()[2].volume();
  CHECK(total == doctest::Approx(ripe_volume).epsilon(1e-12));
  CHECK(sim.agents()[2].behaviors.size() == 1);
}

TEST_CASE("spheroid grows") {
  SpheroidParams p = SpheroidParams::for_case(2000);
  CHECK(p.cluster_diameter == 310.0);
  CHECK(SpheroidParams::for_case(4000).cluster_diameter == 380.0);
  CHECK(SpheroidParams::for_case(8000).cluster_diameter == 460.0);
  CHECK_THROWS(SpheroidParams::for_case(3000));
  const SpheroidRun run = run_spheroid(p, 1);
  const auto d = run.series.column("diameter");
  const auto cells = run.series.column("cells");
  REQUIRE(d.size() == 13);
  CHECK(d.back() > d.front());
  CHECK(cells.back() > cells.front());
  CHECK(d.front() == doctest::Approx(310.0).epsilon(0.1));
}

TEST_CASE("infection rule") {
  CHECK(pair_infection_rate(1.0, 200, false) == 0.0);
  CHECK(pair_infection_rate(1.0, 200) == 1.0);
  CHECK(std::abs(pair_infection_rate(0.3, 10000) - 0.3) <= 0.015);
}

TEST_CASE("recovery rule") {
  SirParams p;
  p.susceptible = 0;
  p.infected = 500;
  p.max_move = 0.0;
  p.days = 0.25;
  p.recovery_probability = 0.0;
  CHECK(run_sir(p, 1).counts.column("R").back() == 0.0);
  p.recovery_probability = 1.0;
  p.days = 0.25;
  const auto r = run_sir(p, 1).counts;
  CHECK(r.at(1, 2) == 500.0);
}

TEST_CASE("mean infectious period") {
  SirParams p = SirParams::for_disease(12.9, 8.0);
  CHECK(p.recovery_probability == doctest::Approx(0.125 / 4));
  p.susceptible = 0;
  p.infected = 100000;
  p.max_move = 0.0;
  p.days = 8.0;
  const TimeSeries c = run_sir(p, 2).counts;
  // Geometric maximum likelihood with censoring: recoveries over exposure.
  double exposure = 0.0;
  for (std::size_t r = 0; r + 1 < c.size(); ++r) exposure += c.at(r, 1);
  const double rate = c.column("R").back() / exposure;
  const double mean_days = 1.0 / rate / p.steps_per_day;
  CHECK(std::abs(mean_days - 8.0) / 8.0 < 0.02);
}

TEST_CASE("movement stays in the cube") {
  CHECK(reflect_into(-2.0, 10.0) == 2.0);
  CHECK(reflect_into(12.5, 10.0) == 7.5);
  CHECK(reflect_into(37.0, 10.0) == 3.0);
  CHECK(reflect_into(4.0, 10.0) == 4.0);

  SirParams still;
  still.max_move = 0.0;
  still.susceptible = 20;
  still.infected = 0;
  still.days = 1;
  std::vector<Vec3> first;
  bool moved = false;
  run_sir(still, 3, 1, [&](const Simulation& sim) {
    if (first.empty()) {
      for (const Agent& a : sim.agents()) first.push_back(a.position);
    } else {
      for (std::size_t i = 0; i < first.size(); ++i) moved |= !(sim.agents()[i].position == first[i]);
    }
  });
  CHECK_FALSE(moved);

  SirParams p;
  p.susceptible = 8;
  p.infected = 2;
  p.infection_radius = 30.0;
  p.cube = 50.0;
  p.max_move = 40.0;
  p.days = 25000.0;
  std::size_t outside = 0;
  std::size_t checked = 0;
  run_sir(p, 4, 1, [&](const Simulation& sim) {
    for (const Agent& a : sim.agents()) {
      ++checked;
      for (int k = 0; k < 3; ++k) outside += a.position[k] < 0.0 || a.position[k] > p.cube;
    }
  });
  CHECK(checked == 10u * 100000u);
  CHECK(outside == 0);
}

TEST_CASE("sir counts start at the initial condition") {
  SirParams p;
  p.days = 1;
  const TimeSeries c = run_sir(p, 8).counts;
  CHECK(c.steps()[0] == 0);
  CHECK(c.at(0, 0) == 2000.0);
  CHECK(c.at(0, 1) == 10.0);
  CHECK(c.at(0, 2) == 0.0);
  SirParams done = p;
  done.susceptible = 0;
  done.infected = 50;
  done.recovery_probability = 1.0;
  const TimeSeries d = run_sir(done, 8).counts;
  CHECK(d.at(d.size() - 1, 2) == 50.0);
}

TEST_CASE("sir parameters from a config section") {
  ParamSet s;
  s.set("r0", "1.3");
  s.set("recovery_days", "4.1");
  s.set("infection_radius", "2.5");
  const SirParams p = SirParams::from(s);
  CHECK(p.recovery_probability == doctest::Approx(1.0 / 4.1 / 4.0));
  CHECK(p.infection_radius == 2.5);
  s.set("bogus", "1");
  CHECK_THROWS_AS(SirParams::from(s), ConfigError);
  ParamSet bad;
  bad.set("infection_probability", "1.5");
  CHECK_THROWS_AS(SirParams::from(bad), ConfigError);
}

TEST_CASE("benchmarks") {
  Benchmark b = build_benchmark("cell_growth_division", 4, 1, 1);
  CHECK(b.sim->population() == 64);
  b.sim->simulate(10);
  CHECK(b.sim->population() >= 3 * 64);
  CHECK_THROWS_AS(build_benchmark("cell_growth_division", 0, 1, 1), std::invalid_argument);
  try {
    build_benchmark("bogus", 2, 1, 1);
    FAIL("expected rejection");
  } catch (const std::out_of_range& e) {
    CHECK(std::string(e.what()).find("soma_clustering") != std::string::npos);
  }
}

TEST_CASE("soma clustering separates the two types") {
  Benchmark b = build_benchmark("soma_clustering", 8, 1, 1);
  const double before = same_type_neighbor_fraction(*b.sim, 20.0);
  b.sim->simulate(1000);
  const double after = same_type_neighbor_fraction(*b.sim, 20.0);
  CHECK(before < 0.6);
  CHECK(after > 0.8);
}

TEST_CASE("registry") {
  CHECK(scenario_names() == "pyramidal, spheroid, sir, cell_growth_division, soma_clustering");
  CHECK_THROWS_AS(find_scenario("bogus"), std::out_of_range);
  for (const ScenarioInfo& s : scenario_registry()) {
    RunOptions o;
    o.seed = 1;
    o.steps = 8;
    if (s.name == "spheroid") o.params.set("end_day", "4");
    const ScenarioResult r = s.run(o);
    CHECK_FALSE(r.series.empty());
    CHECK_FALSE(r.population.empty());
    std::ostringstream a;
    std::ostringstream b;
    r.series.front().second.write_csv(a);
    s.run(o).series.front().second.write_csv(b);
    CHECK(a.str() == b.str());
  }
}

}  // TEST_SUITE
