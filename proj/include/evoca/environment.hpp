#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoca/geometry.hpp"

namespace evoca {

struct Bounds {
  Vec2 min;
  Vec2 max;
  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct Pose {
  Vec2 position;
  double heading = 0.0;
};

/// Static world geometry: axis-aligned wall segments inside a bounding box.
struct Environment {
  std::vector<Segment> walls;
  Bounds bounds;
  /// Suggested ego start, when the track file provides one.
  std::optional<Pose> start;

  /// Throws std::invalid_argument on a diagonal wall or one outside the bounds.
  void validate() const;
};

/// Closed rectangular arena [0, width] x [0, height].
Environment make_arena(double width, double height);

/// Walls of a corridor of the given width around an axis-aligned centreline
/// polyline, closed with dead-end caps at both ends. Ego start is placed a
/// short way in from the first cap, facing along the first leg.
Environment make_corridor(std::span<const Vec2> centerline, double width);

/// Track file: `bounds xmin ymin xmax ymax`, optional `start x y heading_deg`,
/// then one wall per line as `x1 y1 x2 y2` (metres). `#` starts a comment.
Environment parse_track(const std::string& text, const std::string& origin = "<track>");
Environment load_track(const std::filesystem::path& path);
std::string format_track(const Environment& environment);

/// `count` points spaced equally by arc length around the rectangle inset
/// `margin` from the bounds, starting at the middle of the bottom edge and
/// running counter-clockwise.
std::vector<Vec2> equidistant_perimeter(const Bounds& bounds, double margin, std::size_t count);

}  // namespace evoca
