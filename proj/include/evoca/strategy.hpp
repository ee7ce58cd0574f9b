#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evoca/vehicle.hpp"

namespace evoca {

/// Scripted movement policy for an uncontrolled opponent.
struct StrategySpec {
  enum class Kind { kBounceStraight, kRandomTurns, kCircling, kWaypointPatrol };

  Kind kind = Kind::kBounceStraight;
  /// random-turns: steps between redraws and the largest steering drawn.
  std::size_t turn_interval = 40;
  double turn_magnitude = 0.35;
  /// circling: radius of the circle; the turn direction is drawn per vehicle.
  double circle_radius = 10.0;
  /// waypoint-patrol: targets visited cyclically, `dwell_steps` each.
  std::vector<Vec2> waypoints;
  std::size_t dwell_steps = 100;
  double steering_gain = 1.5;
  /// Clamp applied to every strategy's output.
  double max_steering = 0.5235987755982988;
  /// Added to the vehicle seed so two specs with equal seeds still differ.
  std::uint64_t seed_offset = 0;
};

std::string_view strategy_name(StrategySpec::Kind kind);
/// Throws std::invalid_argument for an unknown name.
StrategySpec::Kind parse_strategy_kind(std::string_view name);

/// Steering command for step `step`; a pure function of its arguments.
/// bounce-straight always drives straight (walls reflect scripted vehicles
/// in the world update).
double strategy_step(const StrategySpec& spec, const VehicleState& vehicle, std::size_t step,
                     std::uint64_t seed);

}  // namespace evoca
