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
#include <memory>
#include <stdexcept>
#include <vector>

#include "biosim/simulation.hpp"
#include "helpers.hpp"

using namespace biosim;

namespace {

Operation noop() {
  return Operation::agent_op("noop", [](Agent&, AgentContext&) {});
}

Behavior divider() {
  Behavior b("divide", [](Agent& a, AgentContext& ctx) {
    ctx.enqueue(NewAgentEvent::cell_division(a.id(), 0.5, random_unit_vector(ctx.rng())));
  });
  b.copy_on(EventKind::kCellDivision);
  return b;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("first agent gets id 0") {
  Simulation sim;
  const AgentId id = sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  CHECK(id.value == 0);
  CHECK(sim.population() == 1);
}

TEST_CASE("identical payloads get distinct ids") {
  Simulation sim;
  const AgentId a = sim.add_agent(Agent::sphere({1, 2, 3}, 5));
  const AgentId b = sim.add_agent(Agent::sphere({1, 2, 3}, 5));
  CHECK(a != b);
  CHECK(sim.population() == 2);
}

TEST_CASE("invalid geometry is rejected") {
  Simulation sim;
  CHECK_THROWS_AS(sim.add_agent(Agent::sphere({0, 0, 0}, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(sim.add_agent(Agent::sphere({0, 0, 0}, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(sim.add_agent(Agent::sphere({NAN, 0, 0}, 1.0)), std::invalid_argument);
  CHECK(sim.population() == 0);
}

TEST_CASE("agent added inside a step is visible from the next step") {
  SimulationConfig cfg;
  cfg.min_box_length = 20;
  Simulation sim(cfg);
  const AgentId first = sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  std::vector<int> seen;
  sim.add_operation(Operation::agent_op("probe", [&](Agent& a, AgentContext& ctx) {
    if (a.id() != first) return;
    int n = 0;
    ctx.grid().for_each_neighbor(a.id(), 20.0, [&](const GridEntry&) { ++n; });
    seen.push_back(n);
    if (ctx.step() == 0) ctx.add_agent(Agent::sphere({5, 0, 0}, 10));
  }));
  sim.simulate(2);
  REQUIRE(seen.size() == 2);
  CHECK(seen[0] == 0);
  CHECK(seen[1] == 1);
  CHECK(sim.population() == 2);
}

TEST_CASE("removal takes effect and is idempotent") {
  Simulation sim;
  const AgentId a = sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  const AgentId b = sim.add_agent(Agent::sphere({5, 0, 0}, 10));
  sim.remove_agent(a);
  CHECK(sim.population() == 1);
  CHECK(sim.find(a) == nullptr);
  sim.update_grid();
  int n = 0;
  sim.grid().for_each_neighbor(b, 10.0, [&](const GridEntry&) { ++n; });
  CHECK(n == 0);

  const std::size_t warnings = sim.warning_count();
  sim.remove_agent(a);
  CHECK(sim.population() == 1);
  CHECK(sim.warning_count() == warnings + 1);
  sim.remove_agent(b);
  CHECK(sim.population() == 0);
}

TEST_CASE("removal inside a step lands at the barrier") {
  Simulation sim;
  sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  std::size_t during = 0;
  sim.add_operation(Operation::agent_op("remove", [&](Agent& a, AgentContext& ctx) {
    ctx.remove_agent(a.id());
    ctx.remove_agent(a.id());
    during = ctx.simulation().population();
  }));
  sim.simulate(1);
  CHECK(during == 1);
  CHECK(sim.population() == 0);
  CHECK(sim.total_deaths() == 1);
}

TEST_CASE("cell division halves the volume") {
  Simulation sim;
  const AgentId parent = sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  const double before = sim.at(parent).volume();
  const auto ids = sim.apply_event(NewAgentEvent::cell_division(parent, 0.5, {1, 0, 0}));
  REQUIRE(ids.size() == 1);
  const Agent& mother = sim.at(parent);
  const Agent& daughter = sim.at(ids[0]);
  CHECK(mother.diameter == doctest::Approx(10 * std::cbrt(0.5)).epsilon(1e-12));
  CHECK(daughter.diameter == doctest::Approx(7.937005259840998).epsilon(1e-12));
  CHECK(mother.volume() + daughter.volume() == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("division flags decide which behaviors move") {
  Simulation sim;
  Agent cell = Agent::sphere({0, 0, 0}, 10);
  Behavior kept("kept", [](Agent&, AgentContext&) {});
  kept.copy_on(EventKind::kCellDivision);
  Behavior dropped("dropped", [](Agent&, AgentContext&) {});
  dropped.remove_on(EventKind::kCellDivision);
  Behavior stays("stays", [](Agent&, AgentContext&) {});
  cell.add_behavior(kept).add_behavior(dropped).add_behavior(stays);
  const AgentId parent = sim.add_agent(std::move(cell));
  const auto ids = sim.apply_event(NewAgentEvent::cell_division(parent, 0.5, {0, 0, 1}));

  auto names = [](const Agent& a) {
    std::vector<std::string> n;
    for (const Behavior& b : a.behaviors) n.push_back(b.name());
    return n;
  };
  CHECK(names(sim.at(ids[0])) == std::vector<std::string>{"kept"});
  CHECK(names(sim.at(parent)) == std::vector<std::string>{"kept", "stays"});
}

TEST_CASE("invalid division events are rejected") {
  Simulation sim;
  const AgentId parent = sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  CHECK_THROWS_AS(sim.apply_event(NewAgentEvent::cell_division(parent, 0.0, {1, 0, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(sim.apply_event(NewAgentEvent::cell_division(parent, 1.0, {1, 0, 0})),
                  std::invalid_argument);
  sim.remove_agent(parent);
  CHECK_THROWS_AS(sim.apply_event(NewAgentEvent::cell_division(parent, 0.5, {1, 0, 0})),
                  std::invalid_argument);
}

TEST_CASE("zero steps leave the population unchanged") {
  Simulation sim;
  sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  sim.add_operation(noop());
  const SimulationReport r = sim.simulate(0);
  CHECK(r.population == 1);
  CHECK(r.steps == 0);
}

TEST_CASE("dividing every step doubles the population") {
  SimulationConfig cfg;
  cfg.seed = 3;
  Simulation sim(cfg);
  Agent cell = Agent::sphere({0, 0, 0}, 10);
  cell.add_behavior(divider());
  sim.add_agent(std::move(cell));
  sim.add_operation(behaviors_op());
  sim.simulate(3);
  CHECK(sim.population() == 8);
  for (const Agent& a : sim.agents()) CHECK(a.behaviors.size() == 1);
}

TEST_CASE("operation frequency") {
  Simulation sim;
  int calls = 0;
  sim.add_operation(Operation::standalone_op("every other", [&](Simulation&) { ++calls; }, 2));
  sim.simulate(10);
  CHECK(calls == 5);
  CHECK_THROWS_AS(Operation::standalone_op("bad", [](Simulation&) {}, 0), std::invalid_argument);
}

TEST_CASE("failing behavior reports step, agent and operation") {
  Simulation sim;
  sim.add_agent(Agent::sphere({0, 0, 0}, 10));
  const AgentId bad = sim.add_agent(Agent::sphere({20, 0, 0}, 10));
  sim.add_operation(Operation::agent_op("fragile", [bad](Agent& a, AgentContext& ctx) {
    if (a.id() == bad && ctx.step() == 2) throw std::runtime_error("boom");
  }));
  try {
    sim.simulate(5);
    FAIL("expected a ModelError");
  } catch (const ModelError& e) {
    CHECK(e.step() == 2);
    CHECK(e.agent() == bad);
    CHECK(e.operation() == "fragile");
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("results do not depend on the thread count") {
  auto run = [](int threads) {
    SimulationConfig cfg;
    cfg.seed = 11;
    cfg.threads = threads;
    Simulation sim(cfg);
    for (const Agent& a : testing::random_spheres(50, 100, 5, 1)) {
      Agent c = Agent::sphere(a.position, a.diameter);
      c.add_behavior(Behavior("walk", [](Agent& self, AgentContext& ctx) {
        self.position += random_normal_vector(ctx.rng(), 1.0);
        if (bernoulli(ctx.rng(), 0.1)) {
          ctx.enqueue(NewAgentEvent::cell_division(self.id(), 0.5, random_unit_vector(ctx.rng())));
        }
        if (bernoulli(ctx.rng(), 0.05)) ctx.remove_agent(self.id());
      }).copy_on(EventKind::kCellDivision));
      sim.add_agent(std::move(c));
    }
    sim.add_operation(behaviors_op());
    sim.simulate(20);
    std::vector<std::pair<std::uint64_t, Vec3>> state;
    for (const Agent& a : sim.agents()) state.emplace_back(a.id().value, a.position);
    return state;
  };
  const auto one = run(1);
  CHECK(one.size() > 10);
  CHECK(run(3) == one);
  CHECK(run(4) == one);
}

TEST_CASE("random substreams are reproducible and distinct") {
  RandomStream s(42);
  SplitMix64 a = s.substream(1, 2, 3);
  SplitMix64 b = s.substream(1, 2, 3);
  SplitMix64 c = s.substream(1, 3, 3);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

}  // TEST_SUITE
