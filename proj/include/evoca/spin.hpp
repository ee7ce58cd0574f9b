#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evoca/vehicle.hpp"

namespace evoca {

struct SpinConfig {
  bool enabled = true;
  double heading_sum_threshold = 2.0 * kPi;
  double displacement_threshold = 8.0;
  /// Number of consecutive states in a window.
  std::size_t window_steps = 400;
};

/// True iff the summed signed heading change across the window reaches the
/// threshold while the net displacement stays below its threshold.
bool detect_spinning(std::span<const VehicleState> window, const SpinConfig& config);

/// Sliding-window form of `detect_spinning` for the simulation loop; O(1) per step.
class SpinMonitor {
 public:
  explicit SpinMonitor(const SpinConfig& config);

  void reset(const VehicleState& initial);
  /// Feed the next state; returns true when the latest full window spins.
  bool push(const VehicleState& state);

 private:
  SpinConfig config_;
  // Ring buffers indexed by step mod window: position and cumulative
  // unwrapped heading.
  std::vector<Vec2> positions_;
  std::vector<double> unwrapped_;
  std::size_t count_ = 0;
  double last_heading_ = 0.0;
  double cumulative_ = 0.0;
};

}  // namespace evoca
