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
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "biosim/analysis/convex_hull.hpp"
#include "biosim/analysis/morphometrics.hpp"
#include "biosim/analysis/pso.hpp"
#include "biosim/analysis/sir.hpp"
#include "biosim/analysis/time_series.hpp"
#include "biosim/neuro.hpp"
#include "biosim/random.hpp"
#include "biosim/scenarios/pyramidal.hpp"

using namespace biosim;

namespace {

SirOdeParams measles() {
  const SirRates r = derive_rates(12.9, 8.0);
  SirOdeParams p;
  p.beta = r.beta;
  p.gamma = r.gamma;
  p.n = 2010;
  p.s0 = 2000;
  p.i0 = 10;
  return p;
}

// Independent recursive walk: (branch points, elements, length) below `id`.
struct Walk {
  int branch_points = 0;
  int elements = 0;
  double length = 0.0;
};

Walk walk(const Simulation& sim, AgentId id) {
  const Agent& e = sim.at(id);
  const auto& d = e.data_as<NeuriteData>();
  Walk w{d.daughter_count() == 2 ? 1 : 0, 1, e.length()};
  for (AgentId c : d.daughters) {
    if (!c.valid()) continue;
    const Walk sub = walk(sim, c);
    w.branch_points += sub.branch_points;
    w.elements += sub.elements;
    w.length += sub.length;
  }
  return w;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("rates from R0 and recovery time") {
  const SirRates m = derive_rates(12.9, 8.0);
  CHECK(m.gamma == doctest::Approx(0.125));
  CHECK(m.beta == doctest::Approx(1.6125));
  const SirRates f = derive_rates(1.3, 4.1);
  CHECK(f.gamma == doctest::Approx(0.24390).epsilon(1e-4));
  CHECK(f.beta == doctest::Approx(0.31707).epsilon(1e-4));
  const SirRates u = derive_rates(1.0, 1.0);
  CHECK(u.beta == 1.0);
  CHECK(u.gamma == 1.0);
  CHECK_THROWS_AS(derive_rates(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(derive_rates(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("ode special cases") {
  SirOdeParams p = measles();
  p.beta = 0.0;
  const TimeSeries no_spread = solve_sir_ode(p, 10.0, 0.01);
  const auto s = no_spread.column("S");
  const auto i = no_spread.column("I");
  CHECK(s.back() == doctest::Approx(2000.0));
  CHECK(i.back() == doctest::Approx(10.0 * std::exp(-0.125 * 10.0)).epsilon(1e-8));

  SirOdeParams q = measles();
  q.i0 = 0.0;
  q.n = 2000;
  const TimeSeries free = solve_sir_ode(q, 20.0, 0.01);
  CHECK(free.column("S").back() == 2000.0);
  CHECK(free.column("R").back() == 0.0);
}

TEST_CASE("ode reaches the final-size fixed point") {
  const SirOdeParams p = measles();
  const TimeSeries ts = solve_sir_ode(p, 60.0, 0.01);
  const double s_inf = ts.column("S").back() / p.n;
  const double oracle = final_size(12.9, p.s0 / p.n);
  CHECK(std::abs(s_inf - oracle) < 1e-4);
  for (std::size_t r = 0; r < ts.size(); ++r) {
    CHECK(ts.at(r, 1) + ts.at(r, 2) + ts.at(r, 3) == doctest::Approx(p.n).epsilon(1e-12));
  }
  const std::vector<double> days{0.0, 5.0, 60.0};
  const auto pts = sir_ode_at(p, days, 0.01);
  CHECK(pts[0].s == 2000.0);
  CHECK(pts[2].s == doctest::Approx(ts.column("S").back()).epsilon(1e-9));
}

TEST_CASE("final-size relation") {
  CHECK(final_size(1e-6, 0.995) == doctest::Approx(0.995).epsilon(1e-5));
  CHECK(final_size(12.9, 1.0 - 1e-9) < 1e-4);
  const double flu = final_size(1.3, 2000.0 / 2010.0);
  CHECK(flu == doctest::Approx(0.58).epsilon(0.02 / 0.58));
  const double x = final_size(2.5, 0.99);
  CHECK(std::log(x / 0.99) == doctest::Approx(-2.5 * (1.0 - x)).epsilon(1e-9));
}

TEST_CASE("sir counting") {
  std::vector<Agent> agents;
  for (int i = 0; i < 2010; ++i) {
    Agent a = Agent::sphere({0, 0, 0}, 1);
    a.state = i < 2000 ? kSusceptible : kInfected;
    agents.push_back(a);
  }
  const auto c = count_sir(agents, 3);
  CHECK(c == std::array<std::size_t, 3>{2000, 10, 0});
  for (Agent& a : agents) a.state = kRecovered;
  CHECK(count_sir(agents) == std::array<std::size_t, 3>{0, 0, 2010});
  agents[5].state = 7;
  CHECK_THROWS(count_sir(agents));
}

TEST_CASE("pso on known optima") {
  SUBCASE("sphere function") {
    PsoConfig c;
    c.swarm_size = 30;
    c.iterations = 200;
    c.lower = {-5, -5, -5};
    c.upper = {5, 5, 5};
    c.seed = 1;
    c.objective = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
    const PsoResult r = pso_optimize(c);
    CHECK(r.best_loss < 1e-4);
    CHECK(r.history.size() == 201);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      CHECK(r.history[k].best_loss <= r.history[k - 1].best_loss);
    }
  }
  SUBCASE("one-dimensional quadratic") {
    PsoConfig c;
    c.lower = {-10};
    c.upper = {10};
    c.seed = 2;
    c.objective = [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0); };
    CHECK(pso_optimize(c).best[0] == doctest::Approx(2.0).epsilon(0.005));
  }
  SUBCASE("zero iterations return the initial swarm's best") {
    PsoConfig c;
    c.iterations = 0;
    c.swarm_size = 5;
    c.lower = {0};
    c.upper = {1};
    c.initial_guesses = {{0.25}};
    c.objective = [](std::span<const double> x) { return std::abs(x[0] - 0.25); };
    const PsoResult r = pso_optimize(c);
    CHECK(r.evaluations == 5);
    CHECK(r.best[0] == 0.25);
    CHECK(r.best_loss == 0.0);
  }
  SUBCASE("non-finite losses are penalized") {
    PsoConfig c;
    c.iterations = 20;
    c.lower = {-1};
    c.upper = {1};
    c.objective = [](std::span<const double> x) {
      return x[0] < 0 ? std::numeric_limits<double>::quiet_NaN() : x[0];
    };
    const PsoResult r = pso_optimize(c);
    CHECK(std::isfinite(r.best_loss));
    CHECK(r.best[0] >= 0.0);
  }
  SUBCASE("same seed, same answer, any thread count") {
    PsoConfig c;
    c.iterations = 15;
    c.lower = {-3, -3};
    c.upper = {3, 3};
    c.seed = 9;
    c.objective = [](std::span<const double> x) { return std::pow(x[0] - 1, 2) + std::pow(x[1] + 1, 4); };
    const PsoResult a = pso_optimize(c);
    c.threads = 3;
    const PsoResult b = pso_optimize(c);
    CHECK(a.best == b.best);
    std::ostringstream ha;
    std::ostringstream hb;
    write_pso_history(ha, a);
    write_pso_history(hb, b);
    CHECK(ha.str() == hb.str());
    CHECK(ha.str().rfind("iteration,x0,x1,loss\n", 0) == 0);
  }
  SUBCASE("invalid configuration") {
    PsoConfig c;
    c.lower = {1};
    c.upper = {0};
    c.objective = [](std::span<const double>) { return 0.0; };
    CHECK_THROWS(pso_optimize(c));
  }
}

TEST_CASE("convex hull of a cube") {
  std::vector<Vec3> corners;
  for (int i = 0; i < 8; ++i) corners.push_back({100.0 * (i & 1), 100.0 * ((i >> 1) & 1), 100.0 * (i >> 2)});
  const HullDiameter d = convex_hull_diameter(corners);
  CHECK_FALSE(d.degenerate);
  CHECK(d.volume == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(d.diameter == doctest::Approx(std::cbrt(6e6 / std::numbers::pi)).epsilon(1e-12));
  const ConvexHull h = convex_hull(corners);
  CHECK(h.vertices.size() == 8);
  CHECK(h.faces.size() == 12);
}

TEST_CASE("hull of sphere samples approaches the sphere") {
  SplitMix64 rng(5);
  std::vector<Vec3> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(random_unit_vector(rng) * 155.0);
  const HullDiameter d = convex_hull_diameter(pts);
  CHECK(std::abs(d.diameter - 310.0) / 310.0 < 0.02);
  CHECK(d.diameter < 310.0);
}

TEST_CASE("hull with interior points and duplicates") {
  SplitMix64 rng(6);
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({10.0 * (i & 1), 10.0 * ((i >> 1) & 1), 10.0 * (i >> 2)});
  for (int i = 0; i < 300; ++i) pts.push_back({10 * uniform01(rng), 10 * uniform01(rng), 10 * uniform01(rng)});
  pts.push_back(pts[0]);
  CHECK(convex_hull(pts).volume == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("degenerate hulls fall back to the longest distance") {
  const std::vector<Vec3> line{{0, 0, 0}, {1, 1, 1}, {3, 3, 3}};
  const HullDiameter d = convex_hull_diameter(line);
  CHECK(d.degenerate);
  CHECK(d.diameter == doctest::Approx(std::sqrt(27.0)));
  const std::vector<Vec3> flat{{0, 0, 0}, {4, 0, 0}, {0, 3, 0}, {4, 3, 0}, {1, 1, 0}};
  const HullDiameter f = convex_hull_diameter(flat);
  CHECK(f.degenerate);
  CHECK(f.diameter == doctest::Approx(5.0));
  CHECK(convex_hull_diameter(std::vector<Vec3>{}).diameter == 0.0);
}

TEST_CASE("morphometrics of small arbors") {
  NeuroParams p;
  p.max_element_length = 100;
  SUBCASE("single element") {
    Simulation sim;
    const AgentId soma = sim.add_agent(make_soma({0, 0, 0}, 10));
    const AgentId e = extend_new_neurite(sim, soma, {0, 0, 1}, 2, Lineage::kApical, true, p);
    elongate_terminal(sim.at(e), 6.5, 1.0, {0, 0, 1}, p);
    const Morphometrics m = morphometrics(sim, soma);
    REQUIRE(m.arbors.size() == 1);
    CHECK(m.arbors[0].branch_points == 0);
    CHECK(m.arbors[0].total_length == doctest::Approx(7.0));
    CHECK(m.arbors[0].terminals == 1);
  }
  SUBCASE("one bifurcation") {
    Simulation sim;
    const AgentId soma = sim.add_agent(make_soma({0, 0, 0}, 10));
    const AgentId e = extend_new_neurite(sim, soma, {0, 0, 1}, 2, Lineage::kBasal, false, p);
    elongate_terminal(sim.at(e), 0.5, 1.0, {0, 0, 1}, p);
    const auto kids = branch_terminal(sim, e, {1, 0, 1}, {-1, 0, 1}, p);
    for (AgentId k : kids) elongate_terminal(sim.at(k), 0.5, 1.0, sim.at(k).distal - sim.at(k).proximal, p);
    const Morphometrics m = morphometrics(sim, soma);
    CHECK(m.branch_points == 1);
    CHECK(m.total_length == doctest::Approx(3.0));
    CHECK(m.arbors[0].elements == 3);
    CHECK(m.arbors[0].terminals == 2);
  }
}

TEST_CASE("morphometrics agree with a recursive walk") {
  PyramidalParams p;
  p.steps = 200;
  p.p_basal = 0.03;
  const PyramidalRun run = run_pyramidal(p, 21);
  const Morphometrics m = morphometrics(*run.sim, run.soma);
  int bp = 0;
  double length = 0.0;
  for (const ArborMetrics& a : m.arbors) {
    const Walk w = walk(*run.sim, a.root);
    CHECK(a.branch_points == w.branch_points);
    CHECK(a.elements == w.elements);
    CHECK(a.total_length == doctest::Approx(w.length).epsilon(1e-12));
    bp += w.branch_points;
    length += w.length;
  }
  CHECK(m.branch_points == bp);
  CHECK(m.total_length == doctest::Approx(length).epsilon(1e-12));
  CHECK(bp > 0);
}

TEST_CASE("time series") {
  TimeSeries ts({"S", "I", "R"});
  ts.append(0, {2000.0, 10.0, 0.0});
  ts.append(4, {1990.0, 15.0, 5.0});
  CHECK_THROWS(ts.append(4, {1.0, 2.0, 3.0}));
  CHECK_THROWS(ts.append(5, {1.0, 2.0}));
  CHECK(ts.column("I")[1] == 15.0);
  CHECK_THROWS(ts.column("X"));
  std::ostringstream out;
  ts.write_csv(out);
  CHECK(out.str() == "step,S,I,R\n0,2000,10,0\n4,1990,15,5\n");
}

TEST_CASE("record operation samples at its frequency") {
  Simulation sim;
  sim.add_agent(Agent::sphere({0, 0, 0}, 1));
  auto series = std::make_shared<TimeSeries>(std::vector<std::string>{"population"});
  sim.add_operation(record_op("pop", series, [](const Simulation& s) {
    return std::vector<double>{static_cast<double>(s.population())};
  }, 3));
  sim.simulate(10);
  CHECK(series->steps() == std::vector<std::int64_t>{0, 3, 6, 9});
}

}  // TEST_SUITE
