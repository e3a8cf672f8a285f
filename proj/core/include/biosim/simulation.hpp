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

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "biosim/agent.hpp"
#include "biosim/diffusion_grid.hpp"
#include "biosim/event.hpp"
#include "biosim/parallel.hpp"
#include "biosim/random.hpp"
#include "biosim/uniform_grid.hpp"

namespace biosim {

class Simulation;

enum class OpKind { kAgent, kStandalone };

/// A unit of work the scheduler runs every `frequency`-th step (steps
/// 0, k, 2k, ...). Agent operations run once per live agent, standalone
/// operations once per scheduled step.
struct Operation {
  using AgentBody = std::function<void(Agent&, AgentContext&)>;
  using StandaloneBody = std::function<void(Simulation&)>;

  std::string name;
  OpKind kind = OpKind::kAgent;
  int frequency = 1;
  AgentBody agent_body;
  StandaloneBody standalone_body;

  static Operation agent_op(std::string name, AgentBody body, int frequency = 1);
  static Operation standalone_op(std::string name, StandaloneBody body, int frequency = 1);
};

/// Runs every behavior of the agent in insertion order.
Operation behaviors_op();

/// Steps every registered diffusion grid once.
Operation diffusion_op();

struct SimulationConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  double dt = 1.0;
  double min_box_length = 0.0;
  double box_margin = 0.0;
  double move_epsilon = 1e-9;
};

struct OperationTiming {
  std::string name;
  double seconds = 0.0;
  std::int64_t invocations = 0;
};

struct SimulationReport {
  std::size_t population = 0;
  std::int64_t steps = 0;
  std::int64_t final_step = 0;
  std::size_t births = 0;
  std::size_t deaths = 0;
  double wall_seconds = 0.0;
  std::vector<OperationTiming> timings;
};

/// Raised when an operation fails; carries where it happened.
class ModelError : public std::runtime_error {
 public:
  ModelError(std::int64_t step, AgentId agent, std::string operation, const std::string& what);

  std::int64_t step() const { return step_; }
  AgentId agent() const { return agent_; }
  const std::string& operation() const { return operation_; }

 private:
  std::int64_t step_;
  AgentId agent_;
  std::string operation_;
};

namespace detail {

struct Secretion {
  std::size_t field = 0;
  Vec3 position;
  double amount = 0.0;
};

/// Attach or detach a behavior on the requesting agent.
struct BehaviorChange {
  std::optional<Behavior> attach;
  std::string detach;
};

/// One structural change requested during a step, tagged with the agent
/// whose operation requested it.
struct QueuedChange {
  AgentId origin;
  std::variant<Agent, NewAgentEvent, AgentId, Secretion, BehaviorChange> change;
};

}  // namespace detail

/// Handle given to agent-operation bodies. Everything that would touch shared
/// state is queued here and applied at the step barrier.
class AgentContext {
 public:
  Simulation& simulation() { return *sim_; }
  const Simulation& simulation() const { return *sim_; }
  const UniformGrid& grid() const;
  std::int64_t step() const { return step_; }
  double dt() const;
  std::size_t worker() const { return worker_; }
  AgentId current() const { return current_; }

  /// Random stream private to (seed, step, current agent, operation).
  SplitMix64& rng() { return rng_; }

  void add_agent(Agent agent);
  void remove_agent(AgentId id);
  void enqueue(NewAgentEvent event);
  void secrete(std::size_t field, const Vec3& position, double amount);

  /// Behavior-list changes of the current agent. They take effect at the
  /// barrier; agent.behaviors must not be modified directly during a step.
  void attach_behavior(Behavior behavior);
  void detach_behavior(std::string name);

  const DiffusionGrid& field(std::size_t index) const;

 private:
  friend class Simulation;
  AgentContext(Simulation* sim, std::vector<detail::QueuedChange>* queue, std::size_t worker,
               std::int64_t step)
      : sim_(sim), queue_(queue), worker_(worker), step_(step) {}

  Simulation* sim_;
  std::vector<detail::QueuedChange>* queue_;
  std::size_t worker_;
  std::int64_t step_;
  AgentId current_;
  SplitMix64 rng_;
};

/// Owns the agent population, the operation schedule, the diffusion fields
/// and the spatial index.
///
/// Agents are stored densely in id order. During a step every agent operation
/// sees the population and grid as they were at the start of the step;
/// births, deaths, events and secretions are queued and applied at the
/// barrier that ends the step. Outside of simulate() the mutating calls take
/// effect immediately.
class Simulation {
 public:
  explicit Simulation(SimulationConfig config = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const SimulationConfig& config() const { return config_; }
  const RandomStream& random() const { return random_; }
  int threads() const { return config_.threads; }
  double dt() const { return config_.dt; }
  std::int64_t step() const { return step_; }
  bool in_step() const { return in_step_; }

  /// Throws std::invalid_argument for invalid geometry. Inside a step the
  /// returned id is reserved and the agent becomes live at the barrier.
  AgentId add_agent(Agent agent);

  /// Unknown or already removed ids only log a warning.
  void remove_agent(AgentId id);

  /// Applies a creation event and returns the new ids. Inside a step the
  /// event is queued and an empty vector is returned. Throws
  /// std::invalid_argument for a dead parent or invalid event parameters.
  std::vector<AgentId> apply_event(NewAgentEvent event);

  void add_operation(Operation op);
  std::span<const Operation> operations() const { return operations_; }

  std::size_t add_field(DiffusionSpec spec);
  std::size_t field_index(std::string_view name) const;
  DiffusionGrid& field(std::size_t index) { return *fields_.at(index); }
  const DiffusionGrid& field(std::size_t index) const { return *fields_.at(index); }
  DiffusionGrid& field(std::string_view name) { return field(field_index(name)); }
  std::size_t field_count() const { return fields_.size(); }

  /// Runs `steps` steps. A failing operation aborts with a ModelError.
  SimulationReport simulate(std::int64_t steps);

  std::size_t population() const { return agents_.size(); }
  std::span<Agent> agents() { return agents_; }
  std::span<const Agent> agents() const { return agents_; }
  Agent* find(AgentId id);
  const Agent* find(AgentId id) const;
  Agent& at(AgentId id);
  const Agent& at(AgentId id) const;

  /// Grid as of the start of the current step (inside simulate) or of the
  /// last update_grid() call.
  const UniformGrid& grid() const { return grid_; }
  /// Re-indexes the current population without advancing the stationary
  /// reference snapshot.
  void update_grid();

  std::size_t warning_count() const { return warnings_.load(); }
  void warn(const std::string& message) const;

  std::uint64_t total_births() const { return births_; }
  std::uint64_t total_deaths() const { return deaths_; }

  template <class Body>
  void parallel_for(std::size_t n, Body&& body) const {
    detail::parallel_for(n, config_.threads, std::forward<Body>(body));
  }

 private:
  class BarrierSpawner;
  friend class AgentContext;

  UniformGrid::Options grid_options() const;
  void rebuild_grid(bool advance_history);
  void run_operation(std::size_t index, Operation& op);
  void barrier();
  void apply_change(detail::QueuedChange& item, std::vector<AgentId>& removals,
                    std::vector<Agent>& born, std::vector<AgentId>* created);
  void apply_event_now(NewAgentEvent& event, std::vector<Agent>& born,
                       std::vector<AgentId>* created);
  AgentId next_id() { return AgentId{next_id_++}; }
  void commit(std::vector<Agent>& born, const std::vector<AgentId>& removals);

  SimulationConfig config_;
  RandomStream random_;
  std::vector<Agent> agents_;
  std::vector<std::int64_t> slot_of_id_;
  std::uint64_t next_id_ = 0;
  std::vector<Operation> operations_;
  std::vector<OperationTiming> timings_;
  std::vector<std::unique_ptr<DiffusionGrid>> fields_;
  UniformGrid grid_;
  std::vector<std::vector<detail::QueuedChange>> worker_queues_;
  std::vector<detail::QueuedChange> serial_queue_;
  std::int64_t step_ = 0;
  bool in_step_ = false;
  std::uint64_t births_ = 0;
  std::uint64_t deaths_ = 0;
  mutable std::atomic<std::size_t> warnings_{0};
};

}  // namespace biosim
