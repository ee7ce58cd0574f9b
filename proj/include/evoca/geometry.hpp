#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace evoca {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Segment {
  Vec2 a;
  Vec2 b;
  bool operator==(const Segment&) const = default;
};

/// Rectangle centred at `center`, long axis along `heading`.
struct OrientedBox {
  Vec2 center;
  double heading = 0.0;
  double half_length = 0.0;
  double half_width = 0.0;

  Vec2 axis_u() const { return unit_vector(heading); }
  Vec2 axis_v() const { return unit_vector(heading + kPi / 2); }
  double bounding_radius() const { return std::hypot(half_length, half_width); }
  /// Counter-clockwise, starting at front-left.
  std::array<Vec2, 4> corners() const;
  bool contains(Vec2 p) const;
};

/// Distance along a ray (unit direction) to its first hit on the segment.
std::optional<double> ray_segment(Vec2 origin, Vec2 direction, const Segment& segment);

/// Distance along a ray (unit direction) to the box boundary; 0 if the origin is inside.
std::optional<double> ray_box(Vec2 origin, Vec2 direction, const OrientedBox& box);

/// Separating-axis test on the four box axes; touching counts as overlap.
bool boxes_overlap(const OrientedBox& a, const OrientedBox& b);

/// True if any point of the segment lies in the (closed) box.
bool segment_intersects_box(const Segment& segment, const OrientedBox& box);

}  // namespace evoca
