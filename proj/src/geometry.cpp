#include "evoca/geometry.hpp"

#include <algorithm>
#include <limits>

namespace evoca {

namespace {

constexpr double kParallelEps = 1e-12;

struct LocalFrame {
  Vec2 center;
  Vec2 u;
  Vec2 v;
  Vec2 to_local(Vec2 p) const {
    const Vec2 d = p - center;
    return {dot(d, u), dot(d, v)};
  }
  Vec2 dir_to_local(Vec2 d) const { return {dot(d, u), dot(d, v)}; }
};

LocalFrame frame_of(const OrientedBox& box) { return {box.center, box.axis_u(), box.axis_v()}; }

}  // namespace

double normalize_angle(double angle) {
  if (angle > -kPi && angle <= kPi) return angle;
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 u = axis_u() * half_length;
  const Vec2 v = axis_v() * half_width;
  return {center + u + v, center - u + v, center - u - v, center + u - v};
}

bool OrientedBox::contains(Vec2 p) const {
  const Vec2 local = frame_of(*this).to_local(p);
  return std::abs(local.x) <= half_length && std::abs(local.y) <= half_width;
}

std::optional<double> ray_segment(Vec2 origin, Vec2 direction, const Segment& segment) {
  const Vec2 edge = segment.b - segment.a;
  const Vec2 rel = segment.a - origin;
  const double denom = cross(direction, edge);
  const double scale = std::max(1.0, norm(edge));
  if (std::abs(denom) > kParallelEps * scale) {
    const double t = cross(rel, edge) / denom;
    const double s = cross(rel, direction) / denom;
    if (t >= 0.0 && s >= 0.0 && s <= 1.0) return t;
    return std::nullopt;
  }
  // Parallel: only a collinear segment can be hit.
  if (std::abs(cross(rel, direction)) > kParallelEps * std::max(1.0, norm(rel))) {
    return std::nullopt;
  }
  const double ta = dot(segment.a - origin, direction);
  const double tb = dot(segment.b - origin, direction);
  const double lo = std::min(ta, tb);
  const double hi = std::max(ta, tb);
  if (hi < 0.0) return std::nullopt;
  return std::max(lo, 0.0);
}

std::optional<double> ray_box(Vec2 origin, Vec2 direction, const OrientedBox& box) {
  const LocalFrame frame = frame_of(box);
  const Vec2 o = frame.to_local(origin);
  const Vec2 d = frame.dir_to_local(direction);
  const double half[2] = {box.half_length, box.half_width};
  const double oc[2] = {o.x, o.y};
  const double dc[2] = {d.x, d.y};
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(dc[axis]) < 1e-15) {
      if (std::abs(oc[axis]) > half[axis]) return std::nullopt;
      continue;
    }
    double t1 = (-half[axis] - oc[axis]) / dc[axis];
    double t2 = (half[axis] - oc[axis]) / dc[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_enter = std::max(t_enter, t1);
    t_exit = std::min(t_exit, t2);
  }
  if (t_exit < std::max(t_enter, 0.0)) return std::nullopt;
  return std::max(t_enter, 0.0);
}

bool boxes_overlap(const OrientedBox& a, const OrientedBox& b) {
  const Vec2 delta = b.center - a.center;
  const double reach = a.bounding_radius() + b.bounding_radius();
  if (dot(delta, delta) > reach * reach) return false;

  const Vec2 au = a.axis_u();
  const Vec2 av = a.axis_v();
  const Vec2 bu = b.axis_u();
  const Vec2 bv = b.axis_v();
  for (const Vec2 axis : {au, av, bu, bv}) {
    const double ra = a.half_length * std::abs(dot(au, axis)) + a.half_width * std::abs(dot(av, axis));
    const double rb = b.half_length * std::abs(dot(bu, axis)) + b.half_width * std::abs(dot(bv, axis));
    if (std::abs(dot(delta, axis)) > ra + rb) return false;
  }
  return true;
}

bool segment_intersects_box(const Segment& segment, const OrientedBox& box) {
  const LocalFrame frame = frame_of(box);
  const Vec2 p = frame.to_local(segment.a);
  const Vec2 d = frame.to_local(segment.b) - p;
  // Liang-Barsky clip of p + t d, t in [0, 1], against the box.
  double t0 = 0.0;
  double t1 = 1.0;
  const double pc[2] = {p.x, p.y};
  const double dc[2] = {d.x, d.y};
  const double half[2] = {box.half_length, box.half_width};
  for (int axis = 0; axis < 2; ++axis) {
    if (dc[axis] == 0.0) {
      if (std::abs(pc[axis]) > half[axis]) return false;
      continue;
    }
    double ta = (-half[axis] - pc[axis]) / dc[axis];
    double tb = (half[axis] - pc[axis]) / dc[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace evoca
