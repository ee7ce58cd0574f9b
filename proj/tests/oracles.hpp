#pragma once

// Brute-force reference implementations used only by tests. None of these
// call into the library code paths they are compared against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "evoca/geometry.hpp"
#include "evoca/vehicle.hpp"

namespace evoca::oracle {

/// Forward pass with explicit per-layer matrices built from gene indices.
inline std::vector<double> forward(const std::vector<double>& genes,
                                   const std::vector<std::size_t>& layers,
                                   const std::vector<double>& input) {
  std::vector<double> activation = input;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const std::size_t rows = layers[l] + 1;
    const std::size_t cols = layers[l + 1];
    std::vector<std::vector<double>> w(rows, std::vector<double>(cols));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) w[r][c] = genes[offset++];
    std::vector<double> extended = activation;
    extended.push_back(1.0);
    std::vector<double> out(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
      long double z = 0.0L;
      for (std::size_t r = 0; r < rows; ++r) z += static_cast<long double>(w[r][c]) * extended[r];
      out[c] = static_cast<double>(1.0L / (1.0L + std::exp(-z)));
    }
    activation = out;
  }
  return activation;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0.0 ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/// Rectangle described by its centre, heading and half extents, tested in
/// its own frame.
struct Rect {
  double cx, cy, heading, hl, hw;
  double c = std::cos(heading);
  double s = std::sin(heading);

  bool contains(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return std::abs(u) <= hl && std::abs(v) <= hw;
  }
  Vec2 corner(int k) const {
    const double su[4] = {1, -1, -1, 1};
    const double sv[4] = {1, 1, -1, -1};
    return {cx + su[k] * hl * c - sv[k] * hw * s, cy + su[k] * hl * s + sv[k] * hw * c};
  }
};

inline Rect rect_of(const VehicleState& v) {
  return Rect{v.position.x, v.position.y, v.heading, 0.5 * v.body_length, 0.5 * v.body_width};
}

/// True when the short step p -> q crosses (or touches) segment a-b.
inline bool step_crosses(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
  auto side = [](Vec2 o, Vec2 d, Vec2 x) { return d.x * (x.y - o.y) - d.y * (x.x - o.x); };
  const Vec2 ab{b.x - a.x, b.y - a.y};
  const Vec2 pq{q.x - p.x, q.y - p.y};
  const double s1 = side(a, ab, p), s2 = side(a, ab, q);
  const double s3 = side(p, pq, a), s4 = side(p, pq, b);
  if (s1 == 0.0 && s2 == 0.0) {
    // Collinear: overlap of the projections.
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    const double tp = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
    const double tq = ((q.x - a.x) * ab.x + (q.y - a.y) * ab.y) / len2;
    return std::max(tp, tq) >= 0.0 && std::min(tp, tq) <= 1.0;
  }
  return s1 * s2 <= 0.0 && s3 * s4 <= 0.0;
}

/// Marches a ray in 1 mm increments and returns the end of the first
/// increment that crosses a wall or a rectangle edge (or lands inside a
/// rectangle). Returns max_range when nothing is met.
inline double march_ray(Vec2 origin, double angle, const std::vector<Segment>& walls,
                        const std::vector<Rect>& rects, double max_range) {
  constexpr double kStep = 0.001;
  const double dx = std::cos(angle), dy = std::sin(angle);
  std::vector<Segment> edges = walls;
  for (const auto& r : rects) {
    for (int k = 0; k < 4; ++k) edges.push_back({r.corner(k), r.corner((k + 1) % 4)});
  }
  const long steps = static_cast<long>(std::llround(max_range / kStep));
  Vec2 p = origin;
  for (long k = 1; k <= steps; ++k) {
    const double t = k * kStep;
    const Vec2 q{origin.x + t * dx, origin.y + t * dy};
    for (const auto& e : edges) {
      if (step_crosses(p, q, e.a, e.b)) return t;
    }
    for (const auto& r : rects) {
      if (r.contains(q.x, q.y)) return t;
    }
    p = q;
  }
  return max_range;
}

/// Overlap by dense sampling: boundary points of each rectangle every
/// `spacing` metres plus an interior grid, each point-tested against the other.
inline bool rects_overlap_sampled(const Rect& a, const Rect& b, double spacing = 0.0005) {
  auto sample_into = [spacing](const Rect& from, const Rect& into) {
    for (int k = 0; k < 4; ++k) {
      const Vec2 p = from.corner(k);
      const Vec2 q = from.corner((k + 1) % 4);
      const double len = std::hypot(q.x - p.x, q.y - p.y);
      const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
      for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        if (into.contains(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))) return true;
      }
    }
    const int grid = 8;
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid; ++j) {
        const double u = from.hl * (2.0 * i / grid - 1.0);
        const double v = from.hw * (2.0 * j / grid - 1.0);
        if (into.contains(from.cx + u * from.c - v * from.s, from.cy + u * from.s + v * from.c)) {
          return true;
        }
      }
    }
    return false;
  };
  return sample_into(a, b) || sample_into(b, a);
}

/// Counterfactual replay: vehicle X is blamed iff X at its new pose still
/// overlaps the other vehicle at its old pose.
inline std::vector<bool> blame_two(const VehicleState& a_prev, const VehicleState& a_curr,
                                   const VehicleState& b_prev, const VehicleState& b_curr) {
  const bool a = rects_overlap_sampled(rect_of(a_curr), rect_of(b_prev));
  const bool b = rects_overlap_sampled(rect_of(a_prev), rect_of(b_curr));
  return {a, b};
}

/// Circumradius of three points.
inline double circumradius(Vec2 a, Vec2 b, Vec2 c) {
  const double ab = std::hypot(b.x - a.x, b.y - a.y);
  const double bc = std::hypot(c.x - b.x, c.y - b.y);
  const double ca = std::hypot(a.x - c.x, a.y - c.y);
  const double area2 = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  return ab * bc * ca / (2.0 * area2);
}

}  // namespace evoca::oracle
