#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evoca/collision.hpp"
#include "evoca/environment.hpp"
#include "evoca/neuro.hpp"
#include "evoca/sensor.hpp"
#include "evoca/spin.hpp"
#include "evoca/strategy.hpp"
#include "evoca/vehicle.hpp"

namespace evoca {

struct OpponentSpec {
  VehicleState start;
  StrategySpec strategy;
};

/// Everything needed to reproduce an evaluation, apart from the seed.
struct Scenario {
  Environment environment;
  VehicleState ego_start;
  std::vector<OpponentSpec> opponents;
  RangefinderConfig sensor;
  /// Steering limit applied to network-driven vehicles.
  double max_steering = 30.0 * kPi / 180.0;
  double dt = 0.05;
  std::size_t max_steps = 10000;
  SpinConfig spin;
  /// Starting headings are drawn from the evaluation seed within this many
  /// radians either side of the nominal start heading. 0 keeps them fixed.
  double heading_spread = 0.0;

  std::size_t vehicle_count() const { return opponents.size() + 1; }
  /// Throws std::invalid_argument if vehicles start overlapping each other
  /// or a wall, or a parameter is out of range.
  void validate() const;
};

/// Starting state of vehicle `index` (0 = ego) after the seed is applied.
VehicleState initial_state(const Scenario& scenario, std::size_t index, std::uint64_t seed,
                           std::size_t spawn = 0);

/// Rectangular arena with `opponents` scripted vehicles plus the ego placed
/// equidistantly on a loop inset `margin` from the walls.
struct ArenaLayout {
  double width = 60.0;
  double height = 60.0;
  double margin = 8.0;
  std::size_t opponents = 8;
};
Scenario make_arena_scenario(const ArenaLayout& layout, const VehicleState& vehicle_template,
                             const StrategySpec& strategy);

enum class Termination { kCollision, kSpinPenalty, kStepCap };
std::string_view termination_name(Termination termination);

struct TraceRecord {
  std::size_t step = 0;
  std::size_t vehicle = 0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

struct EvaluationResult {
  double fitness = 0.0;
  Termination termination = Termination::kStepCap;
  bool responsible_collision = false;
  /// Contacts the ego suffered without being responsible.
  std::size_t innocent_contacts = 0;
  std::vector<TraceRecord> trace;
};

/// A collision attributed after one world step.
struct StepCollision {
  CollisionEvent event;
  std::vector<std::size_t> responsible;
};

/// Closed multi-vehicle world. Vehicles are driven either by a network or
/// by a scripted strategy. Scripted vehicles bounce off walls instead of
/// colliding with them; vehicle pairs that already overlapped before a step
/// are not reported again.
class World {
 public:
  World(const Scenario& scenario, std::uint64_t seed);

  std::size_t size() const { return states_.size(); }
  std::size_t step_index() const { return step_; }
  const std::vector<VehicleState>& states() const { return states_; }
  const VehicleState& initial(std::size_t i) const { return initial_[i]; }

  void set_network(std::size_t vehicle, FeedforwardNetwork network);
  void set_strategy(std::size_t vehicle, const StrategySpec& strategy);
  bool is_scripted(std::size_t vehicle) const { return !networks_[vehicle].has_value(); }

  /// Put a vehicle back at its starting position. With a heading spread the
  /// heading is redrawn on every respawn, so a crash is not replayed forever.
  void respawn(std::size_t vehicle);

  /// Advance one step and return the new collisions with their blame.
  /// When `only_vehicle` is set, only collisions involving that vehicle are
  /// reported.
  const std::vector<StepCollision>& step(std::optional<std::size_t> only_vehicle = std::nullopt);

 private:
  void bounce_off_walls(std::size_t vehicle);

  const Scenario* scenario_;
  std::uint64_t seed_;
  std::size_t step_ = 0;
  std::vector<VehicleState> initial_;
  std::vector<std::size_t> spawns_;
  std::vector<VehicleState> states_;
  std::vector<VehicleState> prev_;
  std::vector<std::optional<FeedforwardNetwork>> networks_;
  std::vector<StrategySpec> strategies_;
  std::vector<std::uint64_t> strategy_seeds_;
  std::vector<OrientedBox> bodies_;
  std::vector<double> offsets_;
  std::vector<double> readings_;
  std::vector<double> scratch_;
  std::vector<StepCollision> collisions_;
};

/// Fitness of a chromosome driving the ego through a freshly reset world:
/// the number of completed steps before the first collision the ego is
/// responsible for (0 on a spin), capped at `max_steps`.
EvaluationResult evaluate_chromosome(const Chromosome& chromosome, const Scenario& scenario,
                                     const Topology& topology, std::uint64_t seed,
                                     bool record_trace = false);

}  // namespace evoca
