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

#include "biosim/simulation.hpp"

#include <algorithm>
#include <chrono>

#include <spdlog/spdlog.h>

namespace biosim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

ModelError::ModelError(std::int64_t step, AgentId agent, std::string operation,
                       const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ", operation '" + operation + "'" +
                         (agent.valid() ? ", agent " + std::to_string(agent.value) : "") + ": " +
                         what),
      step_(step),
      agent_(agent),
      operation_(std::move(operation)) {}

Operation Operation::agent_op(std::string name, AgentBody body, int frequency) {
  if (frequency < 1) throw std::invalid_argument("operation frequency must be >= 1");
  Operation op;
  op.name = std::move(name);
  op.kind = OpKind::kAgent;
  op.frequency = frequency;
  op.agent_body = std::move(body);
  return op;
}

Operation Operation::standalone_op(std::string name, StandaloneBody body, int frequency) {
  if (frequency < 1) throw std::invalid_argument("operation frequency must be >= 1");
  Operation op;
  op.name = std::move(name);
  op.kind = OpKind::kStandalone;
  op.frequency = frequency;
  op.standalone_body = std::move(body);
  return op;
}

Operation behaviors_op() {
  return Operation::agent_op("behaviors", [](Agent& agent, AgentContext& ctx) {
    for (const Behavior& b : agent.behaviors) b.run(agent, ctx);
  });
}

Operation diffusion_op() {
  return Operation::standalone_op("diffusion", [](Simulation& sim) {
    for (std::size_t f = 0; f < sim.field_count(); ++f) sim.field(f).step();
  });
}

// AgentContext --------------------------------------------------------------

const UniformGrid& AgentContext::grid() const { return sim_->grid(); }

double AgentContext::dt() const { return sim_->dt(); }

void AgentContext::add_agent(Agent agent) {
  agent.validate();
  queue_->push_back({current_, std::move(agent)});
}

void AgentContext::remove_agent(AgentId id) { queue_->push_back({current_, id}); }

void AgentContext::enqueue(NewAgentEvent event) { queue_->push_back({current_, std::move(event)}); }

void AgentContext::secrete(std::size_t field, const Vec3& position, double amount) {
  queue_->push_back({current_, detail::Secretion{field, position, amount}});
}

void AgentContext::attach_behavior(Behavior behavior) {
  queue_->push_back({current_, detail::BehaviorChange{std::move(behavior), {}}});
}

void AgentContext::detach_behavior(std::string name) {
  queue_->push_back({current_, detail::BehaviorChange{std::nullopt, std::move(name)}});
}

const DiffusionGrid& AgentContext::field(std::size_t index) const { return sim_->field(index); }

// Simulation ----------------------------------------------------------------

class Simulation::BarrierSpawner final : public Spawner {
 public:
  BarrierSpawner(Simulation& sim, const Agent& parent, EventKind kind, std::vector<Agent>& born,
                 std::vector<AgentId>* created)
      : sim_(sim), parent_(parent), kind_(kind), born_(born), created_(created) {}

  AgentId spawn(Agent agent) override {
    agent.validate();
    agent.id_ = sim_.next_id();
    for (const Behavior& b : parent_.behaviors) {
      if (b.copies_on(kind_)) agent.behaviors.push_back(b);
    }
    const AgentId id = agent.id_;
    born_.push_back(std::move(agent));
    if (created_ != nullptr) created_->push_back(id);
    return id;
  }

 private:
  Simulation& sim_;
  const Agent& parent_;
  EventKind kind_;
  std::vector<Agent>& born_;
  std::vector<AgentId>* created_;
};

Simulation::Simulation(SimulationConfig config) : config_(config), random_(config.seed) {
  if (config_.threads < 1) throw std::invalid_argument("thread count must be >= 1");
  if (!(config_.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  worker_queues_.resize(static_cast<std::size_t>(config_.threads));
}

Simulation::~Simulation() = default;

void Simulation::warn(const std::string& message) const {
  warnings_.fetch_add(1, std::memory_order_relaxed);
  spdlog::warn("{}", message);
}

AgentId Simulation::add_agent(Agent agent) {
  agent.validate();
  agent.id_ = next_id();
  const AgentId id = agent.id_;
  if (in_step_) {
    serial_queue_.push_back({AgentId{}, std::move(agent)});
    return id;
  }
  std::vector<Agent> born;
  born.push_back(std::move(agent));
  commit(born, {});
  return id;
}

void Simulation::remove_agent(AgentId id) {
  if (in_step_) {
    serial_queue_.push_back({AgentId{}, id});
    return;
  }
  std::vector<Agent> none;
  commit(none, {id});
}

std::vector<AgentId> Simulation::apply_event(NewAgentEvent event) {
  if (in_step_) {
    serial_queue_.push_back({event.parent, std::move(event)});
    return {};
  }
  std::vector<Agent> born;
  std::vector<AgentId> created;
  apply_event_now(event, born, &created);
  commit(born, {});
  return created;
}

void Simulation::apply_event_now(NewAgentEvent& event, std::vector<Agent>& born,
                                 std::vector<AgentId>* created) {
  Agent* parent = find(event.parent);
  if (parent == nullptr) {
    throw std::invalid_argument(std::string(to_string(event.kind)) + " event: parent " +
                                std::to_string(event.parent.value) + " is not a live agent");
  }
  BarrierSpawner spawner(*this, *parent, event.kind, born, created);
  if (const auto* division = std::get_if<CellDivision>(&event.parameters)) {
    Agent daughter = divide_cell(*parent, *division);
    spawner.spawn(std::move(daughter));
  } else {
    const auto& action = std::get<EventAction>(event.parameters);
    if (!action) throw std::invalid_argument("event has no action");
    action(*parent, spawner);
  }
  std::erase_if(parent->behaviors, [&](const Behavior& b) { return b.removed_on(event.kind); });
}

void Simulation::add_operation(Operation op) {
  if (op.frequency < 1) throw std::invalid_argument("operation frequency must be >= 1");
  if (op.kind == OpKind::kAgent ? !op.agent_body : !op.standalone_body) {
    throw std::invalid_argument("operation '" + op.name + "' has no body");
  }
  timings_.push_back({op.name, 0.0, 0});
  operations_.push_back(std::move(op));
}

std::size_t Simulation::add_field(DiffusionSpec spec) {
  if (spec.name.empty()) throw std::invalid_argument("diffusion field needs a name");
  for (const auto& f : fields_) {
    if (f->name() == spec.name) throw std::invalid_argument("duplicate field '" + spec.name + "'");
  }
  spec.threads = config_.threads;
  fields_.push_back(std::make_unique<DiffusionGrid>(std::move(spec)));
  return fields_.size() - 1;
}

std::size_t Simulation::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i]->name() == name) return i;
  }
  throw std::out_of_range("no diffusion field named '" + std::string(name) + "'");
}

Agent* Simulation::find(AgentId id) {
  if (id.value >= slot_of_id_.size() || slot_of_id_[id.value] < 0) return nullptr;
  return &agents_[static_cast<std::size_t>(slot_of_id_[id.value])];
}

const Agent* Simulation::find(AgentId id) const {
  if (id.value >= slot_of_id_.size() || slot_of_id_[id.value] < 0) return nullptr;
  return &agents_[static_cast<std::size_t>(slot_of_id_[id.value])];
}

Agent& Simulation::at(AgentId id) {
  Agent* a = find(id);
  if (a == nullptr) throw std::out_of_range("agent " + std::to_string(id.value) + " is not live");
  return *a;
}

const Agent& Simulation::at(AgentId id) const {
  const Agent* a = find(id);
  if (a == nullptr) throw std::out_of_range("agent " + std::to_string(id.value) + " is not live");
  return *a;
}

UniformGrid::Options Simulation::grid_options() const {
  UniformGrid::Options o;
  o.min_box_length = config_.min_box_length;
  o.box_margin = config_.box_margin;
  o.move_epsilon = config_.move_epsilon;
  o.threads = config_.threads;
  return o;
}

void Simulation::rebuild_grid(bool advance_history) {
  grid_.rebuild(agents_, grid_options(), advance_history);
}

void Simulation::update_grid() { rebuild_grid(false); }

SimulationReport Simulation::simulate(std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("simulate: step count must be >= 0");
  if (steps > 0 && operations_.empty()) {
    throw std::logic_error("simulate: no operations scheduled");
  }
  const auto start = Clock::now();
  const std::uint64_t births_before = births_;
  const std::uint64_t deaths_before = deaths_;

  for (std::int64_t s = 0; s < steps; ++s) {
    rebuild_grid(true);
    in_step_ = true;
    try {
      for (std::size_t i = 0; i < operations_.size(); ++i) {
        if (step_ % operations_[i].frequency == 0) run_operation(i, operations_[i]);
      }
      in_step_ = false;
      barrier();
    } catch (...) {
      in_step_ = false;
      for (auto& q : worker_queues_) q.clear();
      serial_queue_.clear();
      throw;
    }
    ++step_;
  }

  SimulationReport report;
  report.population = agents_.size();
  report.steps = steps;
  report.final_step = step_;
  report.births = births_ - births_before;
  report.deaths = deaths_ - deaths_before;
  report.wall_seconds = seconds_since(start);
  report.timings = timings_;
  return report;
}

void Simulation::run_operation(std::size_t index, Operation& op) {
  const auto start = Clock::now();
  if (op.kind == OpKind::kAgent) {
    const std::uint64_t salt = index + 1;
    detail::parallel_chunks(agents_.size(), config_.threads, [&](std::size_t w, std::size_t i) {
      Agent& agent = agents_[i];
      AgentContext ctx(this, &worker_queues_[w], w, step_);
      ctx.current_ = agent.id();
      ctx.rng_ = random_.substream(static_cast<std::uint64_t>(step_), agent.id().value, salt);
      try {
        op.agent_body(agent, ctx);
      } catch (const ModelError&) {
        throw;
      } catch (const std::exception& e) {
        throw ModelError(step_, agent.id(), op.name, e.what());
      }
    });
  } else {
    try {
      op.standalone_body(*this);
    } catch (const ModelError&) {
      throw;
    } catch (const std::exception& e) {
      throw ModelError(step_, AgentId{}, op.name, e.what());
    }
  }
  timings_[index].seconds += seconds_since(start);
  ++timings_[index].invocations;
}

void Simulation::apply_change(detail::QueuedChange& item, std::vector<AgentId>& removals,
                              std::vector<Agent>& born, std::vector<AgentId>* created) {
  std::visit(
      [&](auto& change) {
        using T = std::decay_t<decltype(change)>;
        if constexpr (std::is_same_v<T, Agent>) {
          if (!change.id_.valid()) change.id_ = next_id();
          if (created != nullptr) created->push_back(change.id_);
          born.push_back(std::move(change));
        } else if constexpr (std::is_same_v<T, NewAgentEvent>) {
          apply_event_now(change, born, created);
        } else if constexpr (std::is_same_v<T, AgentId>) {
          removals.push_back(change);
        } else if constexpr (std::is_same_v<T, detail::Secretion>) {
          field(change.field).add_amount(change.position, change.amount);
        } else {
          Agent* target = find(item.origin);
          if (target == nullptr) return;
          if (change.attach) target->behaviors.push_back(std::move(*change.attach));
          if (!change.detach.empty()) {
            std::erase_if(target->behaviors,
                          [&](const Behavior& b) { return b.name() == change.detach; });
          }
        }
      },
      item.change);
}

void Simulation::barrier() {
  std::vector<detail::QueuedChange> merged;
  std::size_t total = 0;
  for (const auto& q : worker_queues_) total += q.size();
  merged.reserve(total);
  for (auto& q : worker_queues_) {
    std::move(q.begin(), q.end(), std::back_inserter(merged));
    q.clear();
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const detail::QueuedChange& a, const detail::QueuedChange& b) {
                     return a.origin < b.origin;
                   });

  std::vector<detail::QueuedChange> serial;
  serial.swap(serial_queue_);

  std::vector<AgentId> removals;
  std::vector<Agent> born;
  for (auto* list : {&serial, &merged}) {
    for (auto& item : *list) {
      try {
        apply_change(item, removals, born, nullptr);
      } catch (const std::exception& e) {
        throw ModelError(step_, item.origin, "barrier", e.what());
      }
    }
  }
  commit(born, removals);
}

void Simulation::commit(std::vector<Agent>& born, const std::vector<AgentId>& removals) {
  std::size_t removed = 0;
  for (const AgentId id : removals) {
    if (id.value >= slot_of_id_.size() || slot_of_id_[id.value] < 0) {
      warn("remove_agent: agent " + std::to_string(id.value) + " is not live; ignored");
      continue;
    }
    slot_of_id_[id.value] = -1;
    ++removed;
  }
  if (removed > 0) {
    std::erase_if(agents_, [&](const Agent& a) { return slot_of_id_[a.id_.value] < 0; });
  }
  deaths_ += removed;
  births_ += born.size();

  std::stable_sort(born.begin(), born.end(),
                   [](const Agent& a, const Agent& b) { return a.id_ < b.id_; });
  for (Agent& a : born) agents_.push_back(std::move(a));
  born.clear();

  slot_of_id_.assign(next_id_, -1);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    slot_of_id_[agents_[i].id_.value] = static_cast<std::int64_t>(i);
  }
}

}  // namespace biosim
