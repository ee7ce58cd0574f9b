#pragma once

#include "evoca/geometry.hpp"

namespace evoca {

/// Pose and fixed physical parameters of one vehicle. `position` is the
/// body centre; the rangefinder is mounted there too.
struct VehicleState {
  Vec2 position;
  double heading = 0.0;
  double speed = 10.0;
  double wheelbase = 2.5;
  double body_length = 4.0;
  double body_width = 2.0;

  OrientedBox body() const {
    return {position, heading, 0.5 * body_length, 0.5 * body_width};
  }
  bool operator==(const VehicleState&) const = default;
};

/// Kinematic bicycle update: heading advances by (L / wheelbase) tan(steering)
/// with L = speed * dt, and the position moves L along the mean of the old
/// and new heading.
VehicleState step_vehicle(const VehicleState& state, double steering_angle, double dt);

/// Constant steering angle that traces a circle of the given radius.
double steering_for_radius(double wheelbase, double radius);

}  // namespace evoca
