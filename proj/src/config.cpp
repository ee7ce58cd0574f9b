#include "evoca/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evoca/output.hpp"

namespace evoca {

namespace {

using nlohmann::json;

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid configuration:";
  for (const auto& e : errors) out += "\n  " + e;
  return out;
}

double deg(double d) { return d * kPi / 180.0; }

/// Typed field access that records problems instead of throwing.
class Reader {
 public:
  Reader(const json& object, std::string path, std::vector<std::string>& errors)
      : object_(object), path_(std::move(path)), errors_(errors) {
    if (!object_.is_object()) error(path_.empty() ? "<root>" : path_, "must be an object");
  }

  bool has(const std::string& key) const { return object_.is_object() && object_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const json& value = object_.at(key);
    try {
      if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        if (!value.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!value.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!value.is_boolean()) throw std::invalid_argument("expected true or false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!value.is_string()) throw std::invalid_argument("expected a string");
      }
      out = value.get<T>();
    } catch (const std::exception& e) {
      error(field(key), e.what());
    }
  }

  /// Angle given in degrees, stored in radians.
  void get_degrees(const std::string& key, double& out_radians) {
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    double d = 0.0;
    get(key, d);
    out_radians = deg(d);
  }

  std::optional<Reader> child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return Reader(object_.at(key), field(key), errors_);
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? &object_.at(key) : nullptr;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void error(const std::string& where, const std::string& what) {
    errors_.push_back(where + ": " + what);
  }

  void reject_unknown() {
    if (!object_.is_object()) return;
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.count(key)) error(field(key), "unknown field");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

template <typename T>
void positive(Reader& r, const std::string& key, const T& value) {
  if (!(value > T{})) r.error(r.field(key), "must be positive");
}

StrategySpec read_strategy(Reader& r, std::vector<std::string>& errors) {
  StrategySpec spec;
  std::string kind;
  r.get("kind", kind);
  if (!r.has("kind")) {
    r.error(r.field("kind"), "required");
  } else {
    try {
      spec.kind = parse_strategy_kind(kind);
    } catch (const std::exception& e) {
      r.error(r.field("kind"), e.what());
    }
  }
  r.get("turn_interval", spec.turn_interval);
  r.get_degrees("turn_magnitude_deg", spec.turn_magnitude);
  r.get("circle_radius", spec.circle_radius);
  r.get("dwell_steps", spec.dwell_steps);
  r.get("steering_gain", spec.steering_gain);
  r.get_degrees("max_steering_deg", spec.max_steering);
  r.get("seed_offset", spec.seed_offset);
  if (const json* w = r.raw("waypoints")) {
    bool ok = w->is_array();
    if (ok) {
      for (const auto& p : *w) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          ok = false;
          break;
        }
        spec.waypoints.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    if (!ok) r.error(r.field("waypoints"), "expected a list of [x, y] pairs");
  }
  positive(r, "circle_radius", spec.circle_radius);
  positive(r, "turn_interval", spec.turn_interval);
  positive(r, "dwell_steps", spec.dwell_steps);
  r.reject_unknown();
  (void)errors;
  return spec;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

LoadedConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  LoadedConfig loaded;
  loaded.hash = fnv1a64(text);
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<root>: ") + e.what()});
  }

  std::vector<std::string> errors;
  Reader r(root, "", errors);
  ExperimentSpec& spec = loaded.spec;

  std::string kind;
  r.get("kind", kind);
  if (!r.has("kind")) {
    r.error("kind", "required");
  } else {
    try {
      spec.kind = parse_experiment_kind(kind);
    } catch (const std::exception& e) {
      r.error("kind", e.what());
    }
  }
  r.get("seed", spec.seed);
  r.get("replicates", spec.replicates);
  r.get("generations", spec.generations);
  r.get("workers", spec.workers);

  Scenario& sc = spec.scenario;
  VehicleState& vehicle = sc.ego_start;

  if (auto s = r.child("sensor")) {
    s->get("beam_count", sc.sensor.beam_count);
    s->get_degrees("field_of_view_deg", sc.sensor.field_of_view);
    s->get("max_range", sc.sensor.max_range);
    positive(*s, "max_range", sc.sensor.max_range);
    s->reject_unknown();
  }

  bool explicit_layers = false;
  std::vector<std::size_t> layers;
  if (auto n = r.child("network")) {
    n->get("hidden", spec.hidden);
    if (n->has("layers")) {
      explicit_layers = true;
      n->get("layers", layers);
      if (n->has("hidden")) n->error(n->field("layers"), "give either layers or hidden, not both");
    }
    n->reject_unknown();
  }
  if (explicit_layers) {
    if (layers.size() < 3) {
      r.error("network.layers", "needs an input, at least one hidden and an output layer");
    } else {
      if (layers.back() != Topology::kOutputSize) {
        r.error("network.layers[" + std::to_string(layers.size() - 1) + "]",
                "output layer must have 2 neurons");
      }
      if (spec.kind == ExperimentKind::kSensorSweep) {
        r.error("network.layers", "sensor-sweep varies the input size; use network.hidden");
      } else if (layers.front() != sc.sensor.beam_count) {
        r.error("network.layers[0]", "input size " + std::to_string(layers.front()) +
                                         " does not match sensor.beam_count " +
                                         std::to_string(sc.sensor.beam_count));
      }
      spec.hidden.assign(layers.begin() + 1, layers.end() - 1);
    }
  }

  if (auto g = r.child("ga")) {
    g->get("population_size", spec.ga.population_size);
    g->get("tournament_size", spec.ga.tournament_size);
    g->get("mutation_probability", spec.ga.mutation_probability);
    g->get("mutation_sigma", spec.ga.mutation_sigma);
    g->get("crossover_probability", spec.ga.crossover_probability);
    g->get("crossover_site_mean", spec.ga.crossover_site_mean);
    g->get("crossover_site_stddev", spec.ga.crossover_site_stddev);
    g->get("init_weight_min", spec.ga.init_weight_min);
    g->get("init_weight_max", spec.ga.init_weight_max);
    g->reject_unknown();
  }

  if (auto v = r.child("vehicle")) {
    v->get("speed", vehicle.speed);
    v->get("wheelbase", vehicle.wheelbase);
    v->get("body_length", vehicle.body_length);
    v->get("body_width", vehicle.body_width);
    v->get_degrees("max_steering_deg", sc.max_steering);
    v->reject_unknown();
  }
  if (auto s = r.child("simulation")) {
    s->get("dt", sc.dt);
    s->get("max_steps", sc.max_steps);
    s->reject_unknown();
  }
  if (auto s = r.child("spin")) {
    s->get("enabled", sc.spin.enabled);
    s->get_degrees("heading_sum_deg", sc.spin.heading_sum_threshold);
    s->get("displacement", sc.spin.displacement_threshold);
    s->get("window_steps", sc.spin.window_steps);
    s->reject_unknown();
  }

  std::string track;
  r.get("track", track);
  const bool needs_track =
      spec.kind == ExperimentKind::kNavigation || spec.kind == ExperimentKind::kSensorSweep;
  if (needs_track) {
    if (!r.has("track")) {
      r.error("track", "required for " + std::string(experiment_name(spec.kind)));
    } else if (!track.empty()) {
      try {
        std::filesystem::path p(track);
        if (p.is_relative()) p = base_dir / p;
        sc.environment = load_track(p);
        if (!sc.environment.start) {
          r.error("track", "track file has no start line");
        } else {
          vehicle.position = sc.environment.start->position;
          vehicle.heading = sc.environment.start->heading;
        }
      } catch (const std::exception& e) {
        r.error("track", e.what());
      }
    }
  } else if (r.has("track")) {
    r.error("track", "only used by navigation and sensor-sweep");
  }

  if (auto a = r.child("arena")) {
    a->get("width", spec.arena.width);
    a->get("height", spec.arena.height);
    a->get("margin", spec.arena.margin);
    a->get("opponents", spec.arena.opponents);
    positive(*a, "width", spec.arena.width);
    positive(*a, "height", spec.arena.height);
    a->reject_unknown();
  }

  if (const json* list = r.raw("strategies")) {
    if (!list->is_array()) {
      r.error("strategies", "expected a list");
    } else {
      for (std::size_t i = 0; i < list->size(); ++i) {
        Reader s((*list)[i], "strategies[" + std::to_string(i) + "]", errors);
        spec.strategies.push_back(read_strategy(s, errors));
      }
    }
  }

  if (auto s = r.child("sweep")) {
    s->get("beam_counts", spec.beam_counts);
    s->get("acceptance_fitness", spec.acceptance_fitness);
    s->reject_unknown();
  }
  if (auto s = r.child("incremental")) {
    s->get("acceptance_threshold", spec.acceptance_threshold);
    s->get("generations_per_iteration", spec.generations_per_iteration);
    s->reject_unknown();
  }
  if (auto s = r.child("broadcast")) {
    double seconds = 100.0;
    s->get("duration_seconds", seconds);
    if (!(seconds > 0.0)) s->error(s->field("duration_seconds"), "must be positive");
    if (sc.dt > 0.0) spec.duration_steps = static_cast<std::size_t>(std::llround(seconds / sc.dt));
    s->get("learning_generations", spec.learning_generations);
    s->get("lifetime_cap", spec.lifetime_cap);
    s->reject_unknown();
  } else if (sc.dt > 0.0) {
    spec.duration_steps = static_cast<std::size_t>(std::llround(100.0 / sc.dt));
  }
  r.reject_unknown();

  // Cross-field checks that need a complete spec.
  for (auto& e : spec.validate()) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return loaded;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open configuration file"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace evoca
