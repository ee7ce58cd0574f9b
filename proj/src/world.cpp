#include "evoca/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evoca/random.hpp"

namespace evoca {

namespace {

bool near_segment(const Segment& wall, const OrientedBox& box) {
  const double r = box.bounding_radius();
  const double lo_x = std::min(wall.a.x, wall.b.x) - r, hi_x = std::max(wall.a.x, wall.b.x) + r;
  const double lo_y = std::min(wall.a.y, wall.b.y) - r, hi_y = std::max(wall.a.y, wall.b.y) + r;
  return box.center.x >= lo_x && box.center.x <= hi_x && box.center.y >= lo_y &&
         box.center.y <= hi_y;
}

bool touches_wall(const Segment& wall, const OrientedBox& box) {
  return near_segment(wall, box) && segment_intersects_box(wall, box);
}

}  // namespace

void Scenario::validate() const {
  environment.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (!(max_steering > 0.0 && max_steering < kPi / 2)) {
    throw std::invalid_argument("max_steering must be in (0, pi/2)");
  }
  if (sensor.beam_count == 0) throw std::invalid_argument("sensor needs at least one beam");
  if (!(sensor.max_range > 0.0)) throw std::invalid_argument("sensor max_range must be positive");
  std::vector<VehicleState> starts{ego_start};
  for (const auto& o : opponents) starts.push_back(o.start);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto& s = starts[i];
    if (!(s.speed >= 0.0 && s.wheelbase > 0.0 && s.body_length > 0.0 && s.body_width > 0.0)) {
      throw std::invalid_argument("vehicle " + std::to_string(i) + " has invalid dimensions");
    }
    for (std::size_t j = i + 1; j < starts.size(); ++j) {
      if (boxes_overlap(s.body(), starts[j].body())) {
        throw std::invalid_argument("vehicles " + std::to_string(i) + " and " +
                                    std::to_string(j) + " start overlapping");
      }
    }
    for (const auto& wall : environment.walls) {
      if (touches_wall(wall, s.body())) {
        throw std::invalid_argument("vehicle " + std::to_string(i) + " starts touching a wall");
      }
    }
  }
}

VehicleState initial_state(const Scenario& scenario, std::size_t index, std::uint64_t seed,
                           std::size_t spawn) {
  VehicleState state = index == 0 ? scenario.ego_start : scenario.opponents.at(index - 1).start;
  if (scenario.heading_spread > 0.0) {
    const double u = unit_uniform(spawn == 0 ? derive_seed(seed, {0x4ead, index})
                                             : derive_seed(seed, {0x4ead, index, spawn}));
    state.heading = normalize_angle(state.heading + scenario.heading_spread * (2.0 * u - 1.0));
  }
  return state;
}

Scenario make_arena_scenario(const ArenaLayout& layout, const VehicleState& vehicle_template,
                             const StrategySpec& strategy) {
  Scenario scenario;
  scenario.environment = make_arena(layout.width, layout.height);
  const auto spots =
      equidistant_perimeter(scenario.environment.bounds, layout.margin, layout.opponents + 1);
  const Vec2 middle{0.5 * layout.width, 0.5 * layout.height};
  auto place = [&](Vec2 at) {
    VehicleState s = vehicle_template;
    s.position = at;
    const Vec2 in = middle - at;
    s.heading = std::atan2(in.y, in.x);
    return s;
  };
  scenario.ego_start = place(spots[0]);

  StrategySpec spec = strategy;
  if (spec.kind == StrategySpec::Kind::kWaypointPatrol && spec.waypoints.empty()) {
    const double m = layout.margin;
    spec.waypoints = {{m, m}, {layout.width - m, layout.height - m}, {layout.width - m, m},
                      {m, layout.height - m}, middle};
  }
  for (std::size_t i = 1; i < spots.size(); ++i) {
    spec.seed_offset = strategy.seed_offset + i;
    scenario.opponents.push_back({place(spots[i]), spec});
  }
  // Facing a wall from the margin can leave less room than the turning
  // circle needs, so headings stay within 60 degrees of the arena centre.
  scenario.heading_spread = kPi / 3.0;
  return scenario;
}

std::string_view termination_name(Termination termination) {
  switch (termination) {
    case Termination::kCollision: return "collision";
    case Termination::kSpinPenalty: return "spin-penalty";
    case Termination::kStepCap: return "step-cap";
  }
  return "unknown";
}

// The world keeps a pointer to `scenario`; it must outlive the world.
World::World(const Scenario& scenario, std::uint64_t seed)
    : scenario_(&scenario), seed_(seed), offsets_(beam_offsets(scenario.sensor)) {
  const std::size_t n = scenario.vehicle_count();
  for (std::size_t i = 0; i < n; ++i) initial_.push_back(initial_state(scenario, i, seed));
  states_ = initial_;
  prev_ = initial_;
  spawns_.assign(n, 0);
  networks_.resize(n);
  strategies_.resize(n);
  strategy_seeds_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    strategy_seeds_[i] = derive_seed(seed, {0x57a7, i});
    if (i > 0) strategies_[i] = scenario.opponents[i - 1].strategy;
  }
  bodies_.resize(n);
}

void World::set_network(std::size_t vehicle, FeedforwardNetwork network) {
  if (network.topology().input_size() != scenario_->sensor.beam_count) {
    throw std::invalid_argument("network input size " +
                                std::to_string(network.topology().input_size()) +
                                " does not match beam count " +
                                std::to_string(scenario_->sensor.beam_count));
  }
  networks_.at(vehicle) = std::move(network);
}

void World::set_strategy(std::size_t vehicle, const StrategySpec& strategy) {
  networks_.at(vehicle).reset();
  strategies_.at(vehicle) = strategy;
}

void World::respawn(std::size_t vehicle) {
  states_.at(vehicle) = initial_state(*scenario_, vehicle, seed_, ++spawns_.at(vehicle));
}

void World::bounce_off_walls(std::size_t i) {
  VehicleState& s = states_[i];
  const OrientedBox body = s.body();
  bool touched = false, flip_x = false, flip_y = false;
  const Vec2 dir = unit_vector(s.heading);
  for (const auto& wall : scenario_->environment.walls) {
    if (!touches_wall(wall, body)) continue;
    touched = true;
    if (wall.a.x == wall.b.x) {
      const double side = s.position.x - wall.a.x;
      if ((side < 0.0 && dir.x > 0.0) || (side > 0.0 && dir.x < 0.0)) flip_x = true;
    } else {
      const double side = s.position.y - wall.a.y;
      if ((side < 0.0 && dir.y > 0.0) || (side > 0.0 && dir.y < 0.0)) flip_y = true;
    }
  }
  if (!touched || !(flip_x || flip_y)) return;
  s.position = prev_[i].position;
  s.heading = std::atan2(flip_y ? -dir.y : dir.y, flip_x ? -dir.x : dir.x);
}

const std::vector<StepCollision>& World::step(std::optional<std::size_t> only_vehicle) {
  const Scenario& sc = *scenario_;
  const std::size_t n = states_.size();
  prev_ = states_;
  for (std::size_t i = 0; i < n; ++i) bodies_[i] = prev_[i].body();

  for (std::size_t i = 0; i < n; ++i) {
    double steering;
    if (networks_[i]) {
      sense_into(prev_[i], sc.environment, bodies_, i, sc.sensor, offsets_, readings_);
      steering = steering_command(networks_[i]->forward(readings_, scratch_), sc.max_steering);
    } else {
      steering = strategy_step(strategies_[i], prev_[i], step_, strategy_seeds_[i]);
    }
    states_[i] = step_vehicle(prev_[i], steering, sc.dt);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!networks_[i]) bounce_off_walls(i);
  }

  collisions_.clear();
  auto wanted = [&](std::size_t i) { return !only_vehicle || *only_vehicle == i; };
  for (std::size_t i = 0; i < n; ++i) {
    const OrientedBox body_i = states_[i].body();
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!wanted(i) && !wanted(j)) continue;
      if (!networks_[i] && !networks_[j]) continue;
      if (!boxes_overlap(body_i, states_[j].body())) continue;
      if (boxes_overlap(bodies_[i], bodies_[j])) continue;
      CollisionEvent event{CollisionEvent::Kind::kVehicleVehicle, i, j};
      collisions_.push_back({event, responsible_parties(prev_, states_, event)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!networks_[i] || !wanted(i)) continue;
    const OrientedBox body = states_[i].body();
    const auto& walls = sc.environment.walls;
    for (std::size_t w = 0; w < walls.size(); ++w) {
      if (!touches_wall(walls[w], body) || touches_wall(walls[w], bodies_[i])) continue;
      collisions_.push_back({{CollisionEvent::Kind::kVehicleWall, i, w}, {i}});
    }
  }
  ++step_;
  return collisions_;
}

EvaluationResult evaluate_chromosome(const Chromosome& chromosome, const Scenario& scenario,
                                     const Topology& topology, std::uint64_t seed,
                                     bool record_trace) {
  if (topology.input_size() != scenario.sensor.beam_count) {
    throw std::invalid_argument("topology input size " + std::to_string(topology.input_size()) +
                                " does not match sensor beam_count " +
                                std::to_string(scenario.sensor.beam_count));
  }
  World world(scenario, seed);
  world.set_network(0, decode(chromosome, topology));

  EvaluationResult result;
  auto record = [&] {
    if (!record_trace) return;
    const auto& states = world.states();
    for (std::size_t v = 0; v < states.size(); ++v) {
      result.trace.push_back({world.step_index(), v, states[v].position.x, states[v].position.y,
                              states[v].heading});
    }
  };
  record();

  SpinMonitor spin(scenario.spin);
  spin.reset(world.states()[0]);
  for (std::size_t s = 0; s < scenario.max_steps; ++s) {
    const auto& collisions = world.step(0);
    record();
    bool blamed = false;
    for (const auto& c : collisions) {
      if (std::find(c.responsible.begin(), c.responsible.end(), 0) != c.responsible.end()) {
        blamed = true;
      } else {
        ++result.innocent_contacts;
      }
    }
    if (blamed) {
      result.fitness = static_cast<double>(s);
      result.termination = Termination::kCollision;
      result.responsible_collision = true;
      return result;
    }
    if (spin.push(world.states()[0])) {
      result.fitness = 0.0;
      result.termination = Termination::kSpinPenalty;
      return result;
    }
  }
  result.fitness = static_cast<double>(scenario.max_steps);
  result.termination = Termination::kStepCap;
  return result;
}

}  // namespace evoca
