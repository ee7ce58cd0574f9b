#include "evoca/collision.hpp"

namespace evoca {

std::vector<CollisionEvent> detect_collisions(std::span<const VehicleState> vehicles,
                                              const Environment& environment) {
  std::vector<OrientedBox> bodies;
  bodies.reserve(vehicles.size());
  for (const auto& v : vehicles) bodies.push_back(v.body());

  std::vector<CollisionEvent> events;
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      if (boxes_overlap(bodies[i], bodies[j])) {
        events.push_back({CollisionEvent::Kind::kVehicleVehicle, i, j});
      }
    }
  }
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    for (std::size_t w = 0; w < environment.walls.size(); ++w) {
      if (segment_intersects_box(environment.walls[w], bodies[i])) {
        events.push_back({CollisionEvent::Kind::kVehicleWall, i, w});
      }
    }
  }
  return events;
}

std::vector<std::size_t> responsible_parties(std::span<const VehicleState> prev,
                                             std::span<const VehicleState> curr,
                                             const CollisionEvent& event) {
  if (event.kind == CollisionEvent::Kind::kVehicleWall) return {event.first};
  std::vector<std::size_t> blamed;
  const std::size_t a = event.first;
  const std::size_t b = event.second;
  if (boxes_overlap(curr[a].body(), prev[b].body())) blamed.push_back(a);
  if (boxes_overlap(prev[a].body(), curr[b].body())) blamed.push_back(b);
  return blamed;
}

std::set<std::size_t> attribute_responsibility(std::span<const VehicleState> prev,
                                               std::span<const VehicleState> curr,
                                               std::span<const CollisionEvent> events) {
  std::set<std::size_t> responsible;
  for (const auto& event : events) {
    for (auto id : responsible_parties(prev, curr, event)) responsible.insert(id);
  }
  return responsible;
}

}  // namespace evoca
