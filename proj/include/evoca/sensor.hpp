#pragma once

#include <span>
#include <vector>

#include "evoca/environment.hpp"
#include "evoca/vehicle.hpp"

namespace evoca {

struct RangefinderConfig {
  std::size_t beam_count = 5;
  double field_of_view = kPi;
  double max_range = 20.0;
};

/// Beam offsets relative to the heading, right-most first. Equal spacing
/// across the field of view; a single beam points straight ahead.
std::vector<double> beam_offsets(const RangefinderConfig& config);

/// Normalised distance in [0, 1] along each beam to the nearest wall or
/// other vehicle body; 1.0 when nothing is within range.
std::vector<double> sense(const VehicleState& ego, const Environment& environment,
                          std::span<const VehicleState> others, const RangefinderConfig& config);

/// Same as `sense`, writing into `readings` (resized to beam_count). Bodies
/// are passed as precomputed boxes; `skip` excludes one index (the ego).
void sense_into(const VehicleState& ego, const Environment& environment,
                std::span<const OrientedBox> bodies, std::size_t skip,
                const RangefinderConfig& config, std::span<const double> offsets,
                std::vector<double>& readings);

}  // namespace evoca
