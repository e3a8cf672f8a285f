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
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "biosim/diffusion_grid.hpp"
#include "biosim/random.hpp"
#include "biosim/simulation.hpp"

using namespace biosim;

namespace {

DiffusionSpec cube(int n, double h, double d, double decay = 0.0, double dt = 1.0) {
  DiffusionSpec s;
  s.name = "c";
  s.spacing = h;
  s.dims = {n, n, n};
  s.diffusion = d;
  s.decay = decay;
  s.dt = dt;
  return s;
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("gaussian initial condition") {
  DiffusionSpec s = cube(11, 1.0, 0.0);
  s.origin = {0, 0, -5};
  DiffusionGrid g(s);
  g.init_gaussian_axis(2, 0.0, 2.0, 3.0);
  CHECK(g.value(4, 7, 5) == doctest::Approx(3.0));
  CHECK(g.value(0, 0, 7) == doctest::Approx(3.0 * std::exp(-0.5)));
  CHECK(g.value(2, 3, 3) == g.value(9, 1, 7));
  CHECK_THROWS_AS(g.init_gaussian_axis(2, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(g.init_gaussian_axis(3, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("uniform field is a fixed point") {
  DiffusionGrid g(cube(8, 2.0, 0.5));
  g.fill(1.25);
  for (int i = 0; i < 20; ++i) g.step();
  for (double v : g.values()) CHECK(v == 1.25);
}

TEST_CASE("pure decay scales every node") {
  DiffusionGrid g(cube(6, 1.0, 0.0, 0.1, 0.5));
  SplitMix64 rng(1);
  for (double& v : g.values()) v = uniform01(rng);
  const std::vector<double> before(g.values().begin(), g.values().end());
  g.step();
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(std::abs(g.values()[i] - before[i] * (1.0 - 0.1 * 0.5)) <= 1e-12 * before[i]);
  }
}

TEST_CASE("closed boundary conserves mass") {
  DiffusionGrid g(cube(12, 1.0, 0.15));
  SplitMix64 rng(2);
  for (double& v : g.values()) v = uniform01(rng);
  const double m0 = g.total_mass();
  for (int i = 0; i < 300; ++i) g.step();
  CHECK(std::abs(g.total_mass() - m0) / m0 < 1e-12);
}

TEST_CASE("absorbing boundary loses mass") {
  DiffusionSpec s = cube(9, 1.0, 0.1);
  s.boundary = Boundary::kAbsorbing;
  DiffusionGrid g(s);
  g.fill(1.0);
  g.step();
  CHECK(g.total_mass() < 9.0 * 9.0 * 9.0);
  CHECK(g.min_value() >= 0.0);
}

TEST_CASE("stability violation is rejected with the limit") {
  try {
    DiffusionGrid g(cube(5, 1.0, 0.2));
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("0.166") != std::string::npos);
  }
  CHECK_NOTHROW(DiffusionGrid(cube(5, 1.0, 1.0 / 6.0)));
}

TEST_CASE("point source follows the heat kernel") {
  const int n = 41;
  const double h = 1.0;
  const double d = 0.1;
  const int steps = 100;
  DiffusionGrid g(cube(n, h, d));
  const int c = n / 2;
  g.add_amount(g.node_position(c, c, c), 1.0);
  for (int s = 0; s < steps; ++s) g.step();
  const double t = steps * 1.0;
  auto kernel = [&](double r2) {
    return std::pow(4.0 * std::numbers::pi * d * t, -1.5) * std::exp(-r2 / (4.0 * d * t));
  };
  const double peak = kernel(0.0);
  double worst = 0.0;
  for (int k = c - 10; k <= c + 10; ++k) {
    for (int j = c - 10; j <= c + 10; ++j) {
      for (int i = c - 10; i <= c + 10; ++i) {
        const double r2 = h * h * ((i - c) * (i - c) + (j - c) * (j - c) + (k - c) * (k - c));
        worst = std::max(worst, std::abs(g.value(i, j, k) - kernel(r2)));
      }
    }
  }
  CHECK(worst <= 0.05 * peak);
  CHECK(g.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interpolation") {
  DiffusionGrid g(cube(5, 2.0, 0.0));
  g.set_value(1, 1, 1, 2.0);
  g.set_value(2, 1, 1, 4.0);
  CHECK(g.concentration_at(g.node_position(1, 1, 1)) == 2.0);
  CHECK(g.concentration_at({3.0, 2.0, 2.0}) == doctest::Approx(3.0));

  DiffusionGrid lin(cube(6, 1.5, 0.0));
  for (int k = 0; k < 6; ++k) {
    for (int j = 0; j < 6; ++j) {
      for (int i = 0; i < 6; ++i) {
        const Vec3 p = lin.node_position(i, j, k);
        lin.set_value(i, j, k, 0.5 * p.x - 2.0 * p.y + 0.25 * p.z + 1.0);
      }
    }
  }
  SplitMix64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const Vec3 p{7.5 * uniform01(rng), 7.5 * uniform01(rng), 7.5 * uniform01(rng)};
    const double exact = 0.5 * p.x - 2.0 * p.y + 0.25 * p.z + 1.0;
    CHECK(std::abs(lin.concentration_at(p) - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
  }
  CHECK(lin.out_of_bounds_count() == 0);
  CHECK(lin.concentration_at({-3, 0, 0}) == lin.value(0, 0, 0));
  CHECK(lin.out_of_bounds_count() == 1);
}

TEST_CASE("gradients") {
  DiffusionGrid flat(cube(5, 1.0, 0.0));
  flat.fill(4.0);
  CHECK(norm(flat.gradient_at({2.2, 1.7, 2.9})) == 0.0);

  DiffusionGrid ramp(cube(7, 0.5, 0.0));
  for (int k = 0; k < 7; ++k) {
    for (int j = 0; j < 7; ++j) {
      for (int i = 0; i < 7; ++i) ramp.set_value(i, j, k, 3.0 * ramp.node_position(i, j, k).z);
    }
  }
  const Vec3 gr = ramp.gradient_at({1.3, 1.1, 1.7});
  CHECK(gr.x == doctest::Approx(0.0));
  CHECK(gr.y == doctest::Approx(0.0));
  CHECK(gr.z == doctest::Approx(3.0));

  DiffusionSpec s = cube(5, 2.0, 0.0);
  s.dims = {5, 5, 61};
  s.origin = {0, 0, -60};
  DiffusionGrid gauss(s);
  const double sigma = 20.0;
  gauss.init_gaussian_axis(2, 0.0, sigma, 1.0);
  for (double z : {-30.0, -11.0, 13.0, 27.0}) {
    const Vec3 gz = gauss.gradient_at({4.0, 4.0, z});
    const double exact = -z / (sigma * sigma) * std::exp(-z * z / (2 * sigma * sigma));
    CHECK(gz.z * z < 0.0);
    CHECK(std::abs(gz.z - exact) <= 0.05 * std::abs(exact));
  }
}

TEST_CASE("secretion and the diffusion operation") {
  SimulationConfig cfg;
  Simulation sim(cfg);
  const std::size_t f = sim.add_field(cube(9, 2.0, 0.5));
  CHECK_THROWS_AS(sim.add_field(cube(9, 2.0, 0.5)), std::invalid_argument);
  sim.add_agent(Agent::sphere({8, 8, 8}, 2));
  sim.add_operation(Operation::agent_op("secrete", [f](Agent& a, AgentContext& ctx) {
    ctx.secrete(f, a.position, 2.0);
  }));
  sim.add_operation(diffusion_op());
  sim.simulate(5);
  CHECK(sim.field(f).total_mass() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sim.field_index("c") == f);
  CHECK_THROWS_AS(sim.field_index("missing"), std::out_of_range);
}

TEST_CASE("csv export") {
  DiffusionGrid g(cube(2, 1.0, 0.0));
  g.set_value(1, 1, 1, 0.5);
  std::ostringstream out;
  g.write_csv(out);
  const std::string csv = out.str();
  CHECK(csv.rfind("x,y,z,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.find("1,1,1,0.5\n") != std::string::npos);
}

}  // TEST_SUITE
