#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "evoca/environment.hpp"
#include "evoca/vehicle.hpp"

namespace evoca {

struct CollisionEvent {
  enum class Kind { kVehicleVehicle, kVehicleWall };
  Kind kind = Kind::kVehicleVehicle;
  /// Vehicle index (the lower one for vehicle pairs).
  std::size_t first = 0;
  /// Other vehicle index, or the wall index for wall contacts.
  std::size_t second = 0;

  auto operator<=>(const CollisionEvent&) const = default;
};

/// All pairwise body overlaps and body-wall contacts, in (kind, first, second) order.
std::vector<CollisionEvent> detect_collisions(std::span<const VehicleState> vehicles,
                                              const Environment& environment);

/// Counterfactual blame for one event: a participant is responsible iff the
/// overlap persists when it alone advances from `prev` to `curr` while every
/// other vehicle stays at its `prev` pose. Wall contacts blame the vehicle.
std::vector<std::size_t> responsible_parties(std::span<const VehicleState> prev,
                                             std::span<const VehicleState> curr,
                                             const CollisionEvent& event);

std::set<std::size_t> attribute_responsibility(std::span<const VehicleState> prev,
                                               std::span<const VehicleState> curr,
                                               std::span<const CollisionEvent> events);

}  // namespace evoca
