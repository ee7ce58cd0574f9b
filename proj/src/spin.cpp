#include "evoca/spin.hpp"

#include <cmath>

namespace evoca {

bool detect_spinning(std::span<const VehicleState> window, const SpinConfig& config) {
  if (window.size() < 2) return false;
  double turned = 0.0;
  for (std::size_t i = 1; i < window.size(); ++i) {
    turned += normalize_angle(window[i].heading - window[i - 1].heading);
  }
  const double displacement = norm(window.back().position - window.front().position);
  return std::abs(turned) >= config.heading_sum_threshold &&
         displacement < config.displacement_threshold;
}

SpinMonitor::SpinMonitor(const SpinConfig& config)
    : config_(config), positions_(config.window_steps), unwrapped_(config.window_steps) {}

void SpinMonitor::reset(const VehicleState& initial) {
  count_ = 0;
  cumulative_ = 0.0;
  last_heading_ = initial.heading;
  push(initial);
}

bool SpinMonitor::push(const VehicleState& state) {
  const std::size_t window = config_.window_steps;
  if (count_ > 0) cumulative_ += normalize_angle(state.heading - last_heading_);
  last_heading_ = state.heading;
  const std::size_t slot = count_ % window;
  positions_[slot] = state.position;
  unwrapped_[slot] = cumulative_;
  ++count_;
  if (!config_.enabled || window < 2 || count_ < window) return false;
  const std::size_t oldest = count_ % window;
  const double turned = cumulative_ - unwrapped_[oldest];
  const double displacement = norm(state.position - positions_[oldest]);
  return std::abs(turned) >= config_.heading_sum_threshold &&
         displacement < config_.displacement_threshold;
}

}  // namespace evoca
