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

#include "biosim/neuro.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

namespace biosim {

namespace {

constexpr double kMinRestingLength = 1e-12;

NeuriteData& neurite_data(Agent& a) {
  auto* d = a.data_if<NeuriteData>();
  if (d == nullptr) {
    throw std::invalid_argument("agent " + std::to_string(a.id().value) + " is not a neurite");
  }
  return *d;
}

const NeuriteData& neurite_data(const Agent& a) {
  const auto* d = a.data_if<NeuriteData>();
  if (d == nullptr) {
    throw std::invalid_argument("agent " + std::to_string(a.id().value) + " is not a neurite");
  }
  return *d;
}

Vec3 unit_or_throw(const Vec3& v, const char* what) {
  const Vec3 u = normalized(v);
  if (squared_norm(u) == 0.0 || !is_finite(u)) {
    throw std::invalid_argument(std::string(what) + ": direction must be finite and non-zero");
  }
  return u;
}

int swc_type(Lineage lineage) { return lineage == Lineage::kApical ? kSwcApical : kSwcBasal; }

Agent make_element(const Agent& mother, const Vec3& proximal, const Vec3& distal,
                   double diameter, const NeuriteData& base) {
  Agent e = Agent::cylinder(proximal, distal, diameter);
  NeuriteData d = base;
  d.mother = mother.id();
  d.daughters = {};
  d.resting_length = distance(proximal, distal);
  d.branch_draws = 0;
  e.state = swc_type(d.lineage);
  e.data = d;
  return e;
}

}  // namespace

void NeuroParams::validate() const {
  if (!(max_element_length > initial_length) || !(initial_length > 0.0)) {
    throw std::invalid_argument("neuro: need 0 < initial length < max element length");
  }
  if (!(spring_constant > 0.0) || !(viscosity > 0.0) || !(max_displacement > 0.0)) {
    throw std::invalid_argument("neuro: spring constant, viscosity and max displacement must be > 0");
  }
  if (!(branch_diameter_ratio > 0.0 && branch_diameter_ratio <= 1.0)) {
    throw std::invalid_argument("neuro: branch diameter ratio must lie in (0, 1]");
  }
  if (!(min_diameter > 0.0) || taper_rate < 0.0) {
    throw std::invalid_argument("neuro: min diameter must be > 0 and taper rate >= 0");
  }
}

bool is_soma(const Agent& agent) { return agent.data_if<SomaData>() != nullptr; }
bool is_neurite(const Agent& agent) { return agent.data_if<NeuriteData>() != nullptr; }

Agent make_soma(const Vec3& position, double diameter) {
  Agent a = Agent::sphere(position, diameter);
  a.state = kSwcSoma;
  a.data = SomaData{};
  return a;
}

NewAgentEvent neurite_extension_event(AgentId soma, const Vec3& direction, double diameter,
                                      Lineage lineage, bool on_main_branch,
                                      const NeuroParams& params) {
  params.validate();
  const Vec3 u = unit_or_throw(direction, "neurite extension");
  if (!(diameter > params.min_diameter)) {
    throw std::invalid_argument("neurite extension: diameter must exceed the minimum diameter");
  }
  const double length = params.initial_length;
  const double k = params.spring_constant;
  return NewAgentEvent::custom(
      EventKind::kNeuriteExtension, soma, [=](Agent& parent, Spawner& spawner) {
        auto* soma_data = parent.data_if<SomaData>();
        if (soma_data == nullptr) throw std::invalid_argument("neurite extension needs a soma");
        const Vec3 proximal = parent.position + u * (0.5 * parent.diameter);
        NeuriteData base;
        base.soma = parent.id();
        base.mother_is_soma = true;
        base.spring_constant = k;
        base.lineage = lineage;
        base.on_main_branch = on_main_branch;
        base.soma_anchor = u;
        Agent e = make_element(parent, proximal, proximal + u * length, diameter, base);
        soma_data->roots.push_back(spawner.spawn(std::move(e)));
      });
}

AgentId extend_new_neurite(Simulation& sim, AgentId soma, const Vec3& direction,
                           double diameter, Lineage lineage, bool on_main_branch,
                           const NeuroParams& params) {
  if (sim.in_step()) throw std::logic_error("extend_new_neurite: use the event inside a step");
  const auto ids = sim.apply_event(
      neurite_extension_event(soma, direction, diameter, lineage, on_main_branch, params));
  return ids.at(0);
}

bool elongate_terminal(Agent& element, double speed, double dt, const Vec3& direction,
                       const NeuroParams& params) {
  NeuriteData& d = neurite_data(element);
  if (!d.terminal()) {
    throw std::logic_error("elongate_terminal: element " + std::to_string(element.id().value) +
                           " is not terminal");
  }
  if (element.diameter <= params.min_diameter) return false;
  const Vec3 u = unit_or_throw(direction, "elongate_terminal");
  const double before = element.length();
  element.set_cylinder(element.proximal, element.distal + u * (speed * dt));
  const double grown = element.length() - before;
  d.resting_length = std::max(kMinRestingLength, d.resting_length + grown);
  const double advance = speed * dt;
  element.diameter = std::max(params.min_diameter, element.diameter - params.taper_rate * advance);
  return element.length() > params.max_element_length;
}

NewAgentEvent neurite_split_event(AgentId element) {
  return NewAgentEvent::custom(
      EventKind::kNeuriteExtension, element, [](Agent& parent, Spawner& spawner) {
        NeuriteData& d = neurite_data(parent);
        if (!d.terminal()) throw std::logic_error("neurite split: element is not terminal");
        const Vec3 p = parent.proximal;
        const Vec3 q = parent.distal;
        const Vec3 mid = (p + q) * 0.5;
        const double rest = d.resting_length;
        NeuriteData base = d;
        base.mother_is_soma = false;
        Agent daughter = make_element(parent, mid, q, parent.diameter, base);
        daughter.data_as<NeuriteData>().resting_length = 0.5 * rest;
        parent.set_cylinder(p, mid);
        d.resting_length = 0.5 * rest;
        d.daughters[0] = spawner.spawn(std::move(daughter));
      });
}

NewAgentEvent bifurcation_event(AgentId element, const Vec3& dir_a, const Vec3& dir_b,
                                const NeuroParams& params) {
  params.validate();
  const Vec3 ua = unit_or_throw(dir_a, "bifurcation");
  const Vec3 ub = unit_or_throw(dir_b, "bifurcation");
  const double ratio = params.branch_diameter_ratio;
  const double length = params.initial_length;
  return NewAgentEvent::custom(
      EventKind::kNeuriteBifurcation, element, [=](Agent& parent, Spawner& spawner) {
        NeuriteData& d = neurite_data(parent);
        if (!d.terminal()) {
          throw std::logic_error("bifurcation: element " + std::to_string(parent.id().value) +
                                 " already has daughters");
        }
        const Vec3 axis = normalized(parent.distal - parent.proximal);
        const bool a_main = d.on_main_branch && dot(ua, axis) >= dot(ub, axis);
        const bool b_main = d.on_main_branch && !a_main;
        const double diameter = parent.diameter * ratio;
        NeuriteData base = d;
        base.mother_is_soma = false;
        base.on_main_branch = a_main;
        Agent a = make_element(parent, parent.distal, parent.distal + ua * length, diameter, base);
        base.on_main_branch = b_main;
        Agent b = make_element(parent, parent.distal, parent.distal + ub * length, diameter, base);
        d.daughters[0] = spawner.spawn(std::move(a));
        d.daughters[1] = spawner.spawn(std::move(b));
      });
}

NewAgentEvent side_branch_event(AgentId element, const Vec3& direction,
                                const NeuroParams& params) {
  params.validate();
  const Vec3 u = unit_or_throw(direction, "side branch");
  const double ratio = params.branch_diameter_ratio;
  const double length = params.initial_length;
  return NewAgentEvent::custom(
      EventKind::kNeuriteSideBranch, element, [=](Agent& parent, Spawner& spawner) {
        NeuriteData& d = neurite_data(parent);
        if (d.terminal()) throw std::logic_error("side branch: element is terminal, bifurcate it");
        if (!d.has_free_slot()) {
          throw std::logic_error("side branch: element " + std::to_string(parent.id().value) +
                                 " already has two daughters");
        }
        NeuriteData base = d;
        base.mother_is_soma = false;
        base.on_main_branch = false;
        Agent s = make_element(parent, parent.distal, parent.distal + u * length,
                               parent.diameter * ratio, base);
        const int slot = d.daughters[0].valid() ? 1 : 0;
        d.daughters[slot] = spawner.spawn(std::move(s));
      });
}

std::vector<AgentId> branch_terminal(Simulation& sim, AgentId element, const Vec3& dir_a,
                                     const Vec3& dir_b, const NeuroParams& params) {
  return sim.apply_event(bifurcation_event(element, dir_a, dir_b, params));
}

AgentId side_branch(Simulation& sim, AgentId element, const Vec3& direction,
                    const NeuroParams& params) {
  return sim.apply_event(side_branch_event(element, direction, params)).at(0);
}

double spring_tension(const Agent& element) {
  const NeuriteData& d = neurite_data(element);
  if (!(d.resting_length > 0.0)) {
    throw std::runtime_error("neurite " + std::to_string(element.id().value) +
                             " has a non-positive resting length");
  }
  return d.spring_constant * (element.length() - d.resting_length) / d.resting_length;
}

void apply_neurite_mechanics(Simulation& sim, const NeuroParams& params,
                             const MechanicsParams& contact) {
  std::span<Agent> agents = sim.agents();
  const UniformGrid& grid = sim.grid();
  const double dt = sim.dt();
  std::vector<Vec3> new_distal(agents.size());

  sim.parallel_for(agents.size(), [&](std::size_t i) {
    const Agent& e = agents[i];
    const auto* d = e.data_if<NeuriteData>();
    if (d == nullptr) return;
    Vec3 force;
    if (e.length() > 0.0) {
      force -= normalized(e.distal - e.proximal) * spring_tension(e);
    }
    for (AgentId child : d->daughters) {
      if (!child.valid()) continue;
      const Agent* c = sim.find(child);
      if (c == nullptr) continue;
      if (c->length() > 0.0) force += normalized(c->distal - c->proximal) * spring_tension(*c);
    }
    if (const GridEntry* self = grid.find(e.id())) {
      grid.for_each_neighbor(*self, grid.box_length(), [&](const GridEntry& other) {
        if (other.shape != Shape::kSphere || other.id == d->soma) return;
        const ContactForce f = sphere_cylinder_force(other.position, other.diameter, other.id,
                                                     e.proximal, e.distal, e.diameter, e.id(),
                                                     contact);
        force -= f.force;
      });
    }
    if (!is_finite(force)) {
      throw std::runtime_error("non-finite force on neurite " + std::to_string(e.id().value));
    }
    Vec3 dp = force * (dt / params.viscosity);
    const double n = norm(dp);
    if (n > params.max_displacement) dp *= params.max_displacement / n;
    new_distal[i] = e.distal + dp;
  });

  sim.parallel_for(agents.size(), [&](std::size_t i) {
    Agent& e = agents[i];
    const auto* d = e.data_if<NeuriteData>();
    if (d == nullptr) return;
    Vec3 proximal;
    if (d->mother_is_soma) {
      const Agent& soma = sim.at(d->mother);
      proximal = soma.position + d->soma_anchor * (0.5 * soma.diameter);
    } else {
      const Agent* m = sim.find(d->mother);
      if (m == nullptr) throw std::runtime_error("neurite mother vanished");
      const auto pos = static_cast<std::size_t>(m - agents.data());
      proximal = new_distal[pos];
    }
    e.set_cylinder(proximal, new_distal[i]);
  });
}

Operation neurite_mechanics_op(NeuroParams params, MechanicsParams contact) {
  params.validate();
  return Operation::standalone_op("neurite mechanics", [params, contact](Simulation& sim) {
    apply_neurite_mechanics(sim, params, contact);
  });
}

double max_connectivity_gap(const Simulation& sim) {
  double worst = 0.0;
  for (const Agent& e : sim.agents()) {
    const auto* d = e.data_if<NeuriteData>();
    if (d == nullptr) continue;
    const Agent* m = sim.find(d->mother);
    if (m == nullptr) return std::numeric_limits<double>::infinity();
    const Vec3 anchor =
        d->mother_is_soma ? m->position + d->soma_anchor * (0.5 * m->diameter) : m->distal;
    worst = std::max(worst, distance(anchor, e.proximal));
  }
  return worst;
}

std::string check_neuron_trees(const Simulation& sim) {
  auto fail = [](AgentId id, const std::string& what) {
    return "element " + std::to_string(id.value) + ": " + what;
  };
  for (const Agent& e : sim.agents()) {
    const auto* d = e.data_if<NeuriteData>();
    if (d == nullptr) continue;
    const Agent* m = sim.find(d->mother);
    if (m == nullptr) return fail(e.id(), "mother is not live");
    if (!(d->mother < e.id())) return fail(e.id(), "mother is younger than its daughter");
    if (d->mother_is_soma) {
      const auto* s = m->data_if<SomaData>();
      if (s == nullptr) return fail(e.id(), "root mother is not a soma");
      if (std::count(s->roots.begin(), s->roots.end(), e.id()) != 1) {
        return fail(e.id(), "root not listed exactly once by its soma");
      }
      if (d->soma != m->id()) return fail(e.id(), "soma tag does not match");
    } else {
      const auto* md = m->data_if<NeuriteData>();
      if (md == nullptr) return fail(e.id(), "mother is not a neurite");
      if (std::count(md->daughters.begin(), md->daughters.end(), e.id()) != 1) {
        return fail(e.id(), "not listed exactly once by its mother");
      }
      if (d->soma != md->soma) return fail(e.id(), "soma tag differs from mother");
      if (d->on_main_branch && !md->on_main_branch) {
        return fail(e.id(), "main branch is not connected to the root");
      }
      if (md->lineage != d->lineage) return fail(e.id(), "lineage differs from mother");
    }
    if (d->on_main_branch && d->lineage != Lineage::kApical) {
      return fail(e.id(), "basal element on the main branch");
    }
    int main_children = 0;
    for (AgentId c : d->daughters) {
      if (!c.valid()) continue;
      const Agent* ca = sim.find(c);
      if (ca == nullptr) return fail(e.id(), "daughter is not live");
      const auto* cd = ca->data_if<NeuriteData>();
      if (cd == nullptr || cd->mother != e.id() || cd->mother_is_soma) {
        return fail(e.id(), "daughter does not point back");
      }
      main_children += cd->on_main_branch ? 1 : 0;
    }
    if (d->daughters[0].valid() && d->daughters[0] == d->daughters[1]) {
      return fail(e.id(), "same daughter twice");
    }
    if (main_children > 1) return fail(e.id(), "main branch forks");
    if (!(e.diameter > 0.0) || !(d->resting_length > 0.0)) {
      return fail(e.id(), "non-positive diameter or resting length");
    }
  }
  for (const Agent& s : sim.agents()) {
    const auto* sd = s.data_if<SomaData>();
    if (sd == nullptr) continue;
    for (AgentId r : sd->roots) {
      const Agent* ra = sim.find(r);
      if (ra == nullptr || !is_neurite(*ra)) return fail(r, "listed root is not a neurite");
    }
  }
  return {};
}

std::vector<SwcNode> to_swc(const Simulation& sim, AgentId soma_id) {
  const Agent& soma = sim.at(soma_id);
  const auto& sd = soma.data_as<SomaData>();
  std::vector<SwcNode> nodes;
  nodes.push_back({1, kSwcSoma, soma.position, 0.5 * soma.diameter, -1});

  std::vector<std::pair<AgentId, int>> stack;
  for (auto it = sd.roots.rbegin(); it != sd.roots.rend(); ++it) stack.emplace_back(*it, 1);
  while (!stack.empty()) {
    const auto [id, parent] = stack.back();
    stack.pop_back();
    const Agent& e = sim.at(id);
    const auto& d = e.data_as<NeuriteData>();
    const int index = static_cast<int>(nodes.size()) + 1;
    nodes.push_back({index, swc_type(d.lineage), e.distal, 0.5 * e.diameter, parent});
    for (int c = 1; c >= 0; --c) {
      if (d.daughters[c].valid()) stack.emplace_back(d.daughters[c], index);
    }
  }
  return nodes;
}

void write_swc(std::ostream& out, const std::vector<SwcNode>& nodes) {
  out << "# id type x y z radius parent\n";
  for (const SwcNode& n : nodes) {
    out << fmt::format("{} {} {} {} {} {} {}\n", n.id, n.type, n.position.x, n.position.y,
                       n.position.z, n.radius, n.parent);
  }
}

std::vector<SwcNode> read_swc(std::istream& in) {
  std::vector<SwcNode> nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.size() != 7) {
      throw std::runtime_error("SWC line " + std::to_string(line_no) + ": expected 7 fields, got " +
                               std::to_string(tok.size()));
    }
    auto num = [&](const std::string& s, auto& value) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::runtime_error("SWC line " + std::to_string(line_no) + ": bad number '" + s +
                                 "'");
      }
    };
    SwcNode n;
    num(tok[0], n.id);
    num(tok[1], n.type);
    num(tok[2], n.position.x);
    num(tok[3], n.position.y);
    num(tok[4], n.position.z);
    num(tok[5], n.radius);
    num(tok[6], n.parent);
    nodes.push_back(n);
  }
  return nodes;
}

}  // namespace biosim
