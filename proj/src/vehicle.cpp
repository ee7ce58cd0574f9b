#include "evoca/vehicle.hpp"

#include <cmath>

namespace evoca {

VehicleState step_vehicle(const VehicleState& state, double steering_angle, double dt) {
  VehicleState next = state;
  const double travel = state.speed * dt;
  if (travel == 0.0) return next;
  const double turn = travel / state.wheelbase * std::tan(steering_angle);
  const double mean_heading = state.heading + 0.5 * turn;
  next.position = state.position + unit_vector(mean_heading) * travel;
  next.heading = normalize_angle(state.heading + turn);
  return next;
}

double steering_for_radius(double wheelbase, double radius) {
  return std::atan(wheelbase / radius);
}

}  // namespace evoca
