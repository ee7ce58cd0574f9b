#include "evoca/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace evoca {

void Environment::validate() const {
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const auto& w = walls[i];
    if (w.a.x != w.b.x && w.a.y != w.b.y) {
      throw std::invalid_argument("wall " + std::to_string(i) + " is not axis-aligned");
    }
    if (!bounds.contains(w.a) || !bounds.contains(w.b)) {
      throw std::invalid_argument("wall " + std::to_string(i) + " lies outside the bounds");
    }
  }
  if (!(bounds.min.x < bounds.max.x && bounds.min.y < bounds.max.y)) {
    throw std::invalid_argument("environment bounds are empty");
  }
}

Environment make_arena(double width, double height) {
  Environment env;
  env.bounds = {{0.0, 0.0}, {width, height}};
  const Vec2 a{0.0, 0.0}, b{width, 0.0}, c{width, height}, d{0.0, height};
  env.walls = {{a, b}, {b, c}, {c, d}, {d, a}};
  return env;
}

Environment make_corridor(std::span<const Vec2> centerline, double width) {
  if (centerline.size() < 2) throw std::invalid_argument("corridor needs at least 2 points");
  const double h = 0.5 * width;
  auto direction = [&](std::size_t i) {
    const Vec2 d = centerline[i + 1] - centerline[i];
    const double len = norm(d);
    if (len == 0.0 || (d.x != 0.0 && d.y != 0.0)) {
      throw std::invalid_argument("corridor centreline must be axis-aligned without repeats");
    }
    return d * (1.0 / len);
  };
  auto left_normal = [](Vec2 d) { return Vec2{-d.y, d.x}; };

  std::vector<Vec2> left, right;
  const std::size_t n = centerline.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 offset;
    if (i == 0) {
      offset = left_normal(direction(0)) * h;
    } else if (i + 1 == n) {
      offset = left_normal(direction(n - 2)) * h;
    } else {
      const Vec2 n1 = left_normal(direction(i - 1));
      const Vec2 n2 = left_normal(direction(i));
      offset = (dot(n1, n2) > 0.5) ? n1 * h : (n1 + n2) * h;
    }
    left.push_back(centerline[i] + offset);
    right.push_back(centerline[i] - offset);
  }

  Environment env;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    env.walls.push_back({left[i], left[i + 1]});
    env.walls.push_back({right[i], right[i + 1]});
  }
  env.walls.push_back({left.front(), right.front()});
  env.walls.push_back({left.back(), right.back()});

  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo.x, -lo.y};
  for (const auto& w : env.walls) {
    for (Vec2 p : {w.a, w.b}) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
  }
  env.bounds = {lo, hi};

  const Vec2 d0 = direction(0);
  const double inset = std::min(h, 0.5 * norm(centerline[1] - centerline[0]));
  env.start = Pose{centerline[0] + d0 * inset, std::atan2(d0.y, d0.x)};
  return env;
}

Environment parse_track(const std::string& text, const std::string& origin) {
  Environment env;
  bool have_bounds = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "bounds") {
      double x0, y0, x1, y1;
      if (!(fields >> x0 >> y0 >> x1 >> y1)) fail("bounds needs 4 numbers");
      env.bounds = {{x0, y0}, {x1, y1}};
      have_bounds = true;
    } else if (first == "start") {
      double x, y, deg;
      if (!(fields >> x >> y >> deg)) fail("start needs x y heading_deg");
      env.start = Pose{{x, y}, normalize_angle(deg * kPi / 180.0)};
    } else {
      double x1, y1, x2, y2;
      std::istringstream wall(line);
      if (!(wall >> x1 >> y1 >> x2 >> y2)) fail("expected wall 'x1 y1 x2 y2'");
      std::string extra;
      if (wall >> extra) fail("trailing text after wall");
      env.walls.push_back({{x1, y1}, {x2, y2}});
    }
  }
  if (!have_bounds) throw std::invalid_argument(origin + ": missing 'bounds' header");
  try {
    env.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  return env;
}

Environment load_track(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open track file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_track(buffer.str(), path.string());
}

std::string format_track(const Environment& env) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "bounds " << env.bounds.min.x << ' ' << env.bounds.min.y << ' ' << env.bounds.max.x
      << ' ' << env.bounds.max.y << '\n';
  if (env.start) {
    out << "start " << env.start->position.x << ' ' << env.start->position.y << ' '
        << env.start->heading * 180.0 / kPi << '\n';
  }
  for (const auto& w : env.walls) {
    out << w.a.x << ' ' << w.a.y << ' ' << w.b.x << ' ' << w.b.y << '\n';
  }
  return out.str();
}

std::vector<Vec2> equidistant_perimeter(const Bounds& bounds, double margin, std::size_t count) {
  const double x0 = bounds.min.x + margin, x1 = bounds.max.x - margin;
  const double y0 = bounds.min.y + margin, y1 = bounds.max.y - margin;
  if (!(x0 < x1 && y0 < y1)) throw std::invalid_argument("placement margin too large for bounds");
  const double w = x1 - x0, h = y1 - y0;
  const double perimeter = 2.0 * (w + h);
  std::vector<Vec2> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double s = std::fmod(0.5 * w + perimeter * static_cast<double>(i) / static_cast<double>(count),
                         perimeter);
    if (s < w) {
      points.push_back({x0 + s, y0});
    } else if ((s -= w) < h) {
      points.push_back({x1, y0 + s});
    } else if ((s -= h) < w) {
      points.push_back({x1 - s, y1});
    } else {
      s -= w;
      points.push_back({x0, y1 - s});
    }
  }
  return points;
}

}  // namespace evoca
