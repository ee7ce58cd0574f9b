#include "evoca/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evoca/random.hpp"

namespace evoca {

std::string_view strategy_name(StrategySpec::Kind kind) {
  switch (kind) {
    case StrategySpec::Kind::kBounceStraight: return "bounce-straight";
    case StrategySpec::Kind::kRandomTurns: return "random-turns";
    case StrategySpec::Kind::kCircling: return "circling";
    case StrategySpec::Kind::kWaypointPatrol: return "waypoint-patrol";
  }
  return "unknown";
}

StrategySpec::Kind parse_strategy_kind(std::string_view name) {
  for (auto kind : {StrategySpec::Kind::kBounceStraight, StrategySpec::Kind::kRandomTurns,
                    StrategySpec::Kind::kCircling, StrategySpec::Kind::kWaypointPatrol}) {
    if (strategy_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown strategy kind '" + std::string(name) + "'");
}

double strategy_step(const StrategySpec& spec, const VehicleState& vehicle, std::size_t step,
                     std::uint64_t seed) {
  const std::uint64_t own = derive_seed(seed, {spec.seed_offset});
  double steering = 0.0;
  switch (spec.kind) {
    case StrategySpec::Kind::kBounceStraight:
      steering = 0.0;
      break;
    case StrategySpec::Kind::kRandomTurns: {
      const std::size_t interval = std::max<std::size_t>(1, spec.turn_interval);
      const double u = unit_uniform(derive_seed(own, {step / interval}));
      steering = spec.turn_magnitude * (2.0 * u - 1.0);
      break;
    }
    case StrategySpec::Kind::kCircling: {
      const double direction = (mix64(own) & 1U) ? 1.0 : -1.0;
      steering = direction * steering_for_radius(vehicle.wheelbase, spec.circle_radius);
      break;
    }
    case StrategySpec::Kind::kWaypointPatrol: {
      if (spec.waypoints.empty()) break;
      const std::size_t n = spec.waypoints.size();
      const std::size_t first = static_cast<std::size_t>(mix64(own) % n);
      const std::size_t dwell = std::max<std::size_t>(1, spec.dwell_steps);
      const Vec2 target = spec.waypoints[(first + step / dwell) % n];
      const Vec2 to = target - vehicle.position;
      if (to.x == 0.0 && to.y == 0.0) break;
      steering = spec.steering_gain * normalize_angle(std::atan2(to.y, to.x) - vehicle.heading);
      break;
    }
  }
  return std::clamp(steering, -spec.max_steering, spec.max_steering);
}

}  // namespace evoca
