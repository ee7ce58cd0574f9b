#include "evoca/sensor.hpp"

#include <algorithm>
#include <limits>

namespace evoca {

std::vector<double> beam_offsets(const RangefinderConfig& config) {
  std::vector<double> offsets(config.beam_count, 0.0);
  if (config.beam_count == 1) return offsets;
  const double spacing = config.field_of_view / static_cast<double>(config.beam_count - 1);
  for (std::size_t i = 0; i < config.beam_count; ++i) {
    offsets[i] = -0.5 * config.field_of_view + spacing * static_cast<double>(i);
  }
  return offsets;
}

void sense_into(const VehicleState& ego, const Environment& environment,
                std::span<const OrientedBox> bodies, std::size_t skip,
                const RangefinderConfig& config, std::span<const double> offsets,
                std::vector<double>& readings) {
  readings.resize(offsets.size());
  const Vec2 origin = ego.position;
  const double range = config.max_range;
  for (std::size_t b = 0; b < offsets.size(); ++b) {
    const Vec2 dir = unit_vector(ego.heading + offsets[b]);
    double nearest = range;
    for (const auto& wall : environment.walls) {
      if (auto t = ray_segment(origin, dir, wall); t && *t < nearest) nearest = *t;
    }
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      if (i == skip) continue;
      const OrientedBox& box = bodies[i];
      // Cheap reject: the ray misses the bounding circle or it is out of range.
      const Vec2 rel = box.center - origin;
      const double along = dot(rel, dir);
      const double radius = box.bounding_radius();
      if (along + radius < 0.0 || along - radius > nearest) continue;
      const double perp = cross(dir, rel);
      if (std::abs(perp) > radius) continue;
      if (auto t = ray_box(origin, dir, box); t && *t < nearest) nearest = *t;
    }
    readings[b] = std::min(nearest, range) / range;
  }
}

std::vector<double> sense(const VehicleState& ego, const Environment& environment,
                          std::span<const VehicleState> others, const RangefinderConfig& config) {
  std::vector<OrientedBox> bodies;
  bodies.reserve(others.size());
  for (const auto& o : others) bodies.push_back(o.body());
  std::vector<double> readings;
  const auto offsets = beam_offsets(config);
  sense_into(ego, environment, bodies, std::numeric_limits<std::size_t>::max(), config, offsets,
             readings);
  return readings;
}

}  // namespace evoca
