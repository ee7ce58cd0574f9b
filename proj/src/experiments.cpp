#include "evoca/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "evoca/random.hpp"

namespace evoca {

namespace {

constexpr ExperimentKind kAllKinds[] = {
    ExperimentKind::kNavigation,        ExperimentKind::kSensorSweep,
    ExperimentKind::kIndividualCa,      ExperimentKind::kCrossEval,
    ExperimentKind::kIncremental,       ExperimentKind::kBroadcastChampion,
    ExperimentKind::kBroadcastPopulation,
};

bool uses_strategies(ExperimentKind kind) {
  return kind != ExperimentKind::kNavigation && kind != ExperimentKind::kSensorSweep;
}

std::vector<Chromosome> chromosomes_of(const std::vector<Individual>& population) {
  std::vector<Chromosome> out;
  out.reserve(population.size());
  for (const auto& individual : population) out.push_back(individual.chromosome);
  return out;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kNavigation: return "navigation";
    case ExperimentKind::kSensorSweep: return "sensor-sweep";
    case ExperimentKind::kIndividualCa: return "individual-ca";
    case ExperimentKind::kCrossEval: return "cross-eval";
    case ExperimentKind::kIncremental: return "incremental";
    case ExperimentKind::kBroadcastChampion: return "broadcast-champion";
    case ExperimentKind::kBroadcastPopulation: return "broadcast-population";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : kAllKinds) {
    if (experiment_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown experiment kind '" + std::string(name) + "'");
}

Topology ExperimentSpec::topology() const { return topology(scenario.sensor.beam_count); }

Topology ExperimentSpec::topology(std::size_t beam_count) const {
  return Topology::with_hidden(beam_count, hidden);
}

std::vector<std::string> ExperimentSpec::validate() const {
  std::vector<std::string> errors;
  for (const auto& e : ga.validate()) errors.push_back("ga: " + e);
  if (generations == 0) errors.push_back("generations must be positive");
  if (replicates == 0) errors.push_back("replicates must be positive");
  if (workers == 0) errors.push_back("workers must be positive");
  for (std::size_t h : hidden) {
    if (h == 0) errors.push_back("network.hidden: layer sizes must be positive");
  }
  if (hidden.empty()) errors.push_back("network.hidden: at least one hidden layer is required");
  if (kind == ExperimentKind::kSensorSweep) {
    if (beam_counts.empty()) errors.push_back("sweep.beam_counts must not be empty");
    for (std::size_t b : beam_counts) {
      if (b == 0) errors.push_back("sweep.beam_counts: entries must be positive");
    }
  }
  if (uses_strategies(kind) && strategies.empty()) {
    errors.push_back("strategies must not be empty for " + std::string(experiment_name(kind)));
  }
  if (kind == ExperimentKind::kCrossEval && strategies.size() < 2) {
    errors.push_back("cross-eval needs at least 2 strategies");
  }
  if (kind == ExperimentKind::kIncremental) {
    if (!(acceptance_threshold > 0.0)) {
      errors.push_back("incremental.acceptance_threshold must be positive");
    }
    if (generations_per_iteration == 0) {
      errors.push_back("incremental.generations_per_iteration must be positive");
    }
  }
  if (kind == ExperimentKind::kBroadcastChampion || kind == ExperimentKind::kBroadcastPopulation) {
    if (duration_steps == 0) errors.push_back("broadcast.duration_steps must be positive");
    if (kind == ExperimentKind::kBroadcastPopulation && lifetime_cap == 0) {
      errors.push_back("broadcast.lifetime_cap must be positive");
    }
  }
  try {
    if (uses_strategies(kind)) {
      if (!strategies.empty()) strategy_scenario(*this, strategies.front()).validate();
    } else {
      scenario.validate();
    }
  } catch (const std::exception& e) {
    errors.push_back(std::string("scenario: ") + e.what());
  }
  return errors;
}

std::uint64_t replicate_seed(const ExperimentSpec& spec, std::size_t replicate) {
  return derive_seed(spec.seed, {replicate});
}

std::uint64_t scenario_seed(std::uint64_t run_seed, std::size_t strategy) {
  return derive_seed(run_seed, {0x5ce7a, strategy});
}

Scenario strategy_scenario(const ExperimentSpec& spec, const StrategySpec& strategy) {
  Scenario scenario = make_arena_scenario(spec.arena, spec.scenario.ego_start, strategy);
  scenario.sensor = spec.scenario.sensor;
  scenario.max_steering = spec.scenario.max_steering;
  scenario.dt = spec.scenario.dt;
  scenario.max_steps = spec.scenario.max_steps;
  scenario.spin = spec.scenario.spin;
  return scenario;
}

RunResult train_on_scenario(const Scenario& scenario, const Topology& topology,
                            const GAConfig& ga, std::size_t generations, std::uint64_t run_seed,
                            std::uint64_t evaluation_seed, std::size_t workers,
                            const std::string& label, const ProgressFn& progress,
                            std::optional<std::vector<Chromosome>> initial) {
  RunResult run;
  run.label = label;
  run.seed = run_seed;
  run.evaluation_seed = evaluation_seed;
  run.topology = topology;

  const FitnessFn fitness = [&](const Chromosome& c, std::uint64_t) {
    return evaluate_chromosome(c, scenario, topology, evaluation_seed).fitness;
  };
  EvolveOptions options;
  options.generations = generations;
  options.seed = run_seed;
  options.workers = workers;
  options.initial_population = std::move(initial);
  if (progress) {
    options.on_generation = [&](const GenerationRecord& record, const std::vector<Individual>&) {
      progress(label, record);
      return true;
    };
  }
  run.history = evolve(fitness, ga, topology, options);
  return run;
}

std::vector<RunResult> run_navigation(const ExperimentSpec& spec, const ProgressFn& progress) {
  std::vector<RunResult> runs;
  const Topology topology = spec.topology();
  for (std::size_t r = 0; r < spec.replicates; ++r) {
    const std::uint64_t seed = replicate_seed(spec, r);
    runs.push_back(train_on_scenario(spec.scenario, topology, spec.ga, spec.generations, seed,
                                     scenario_seed(seed, 0), spec.workers,
                                     "s" + std::to_string(r), progress));
  }
  return runs;
}

std::vector<SweepResult> run_sensor_sweep(const ExperimentSpec& spec, const ProgressFn& progress) {
  std::vector<SweepResult> results;
  for (std::size_t beams : spec.beam_counts) {
    Scenario scenario = spec.scenario;
    scenario.sensor.beam_count = beams;
    const Topology topology = spec.topology(beams);
    SweepResult sweep;
    sweep.beam_count = beams;
    for (std::size_t r = 0; r < spec.replicates; ++r) {
      const std::uint64_t seed = replicate_seed(spec, r);
      sweep.runs.push_back(train_on_scenario(
          scenario, topology, spec.ga, spec.generations, seed, scenario_seed(seed, 0),
          spec.workers, "b" + std::to_string(beams) + "_s" + std::to_string(r), progress));
    }
    results.push_back(std::move(sweep));
  }
  return results;
}

std::vector<RunResult> run_individual_ca(const ExperimentSpec& spec, const ProgressFn& progress) {
  std::vector<RunResult> runs;
  const Topology topology = spec.topology();
  for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
    const Scenario scenario = strategy_scenario(spec, spec.strategies[s]);
    const std::string name(strategy_name(spec.strategies[s].kind));
    for (std::size_t r = 0; r < spec.replicates; ++r) {
      const std::uint64_t seed = replicate_seed(spec, r);
      runs.push_back(train_on_scenario(scenario, topology, spec.ga, spec.generations, seed,
                                       scenario_seed(seed, s), spec.workers,
                                       std::to_string(s) + "-" + name + "_s" + std::to_string(r),
                                       progress));
    }
  }
  return runs;
}

bool CrossStrategyMatrix::diagonal_dominant() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = 0; j < entries.size(); ++j) {
      if (j != i && !(entries[i][i] > entries[i][j])) return false;
    }
  }
  return true;
}

CrossStrategyMatrix cross_evaluate(const std::vector<Chromosome>& champions,
                                   const std::vector<Scenario>& scenarios,
                                   const std::vector<std::uint64_t>& seeds,
                                   const Topology& topology) {
  if (scenarios.size() != champions.size() || seeds.size() != scenarios.size()) {
    throw std::invalid_argument("cross_evaluate needs one champion, scenario and seed per strategy");
  }
  CrossStrategyMatrix matrix;
  matrix.entries.assign(scenarios.size(), std::vector<double>(champions.size(), 0.0));
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    for (std::size_t j = 0; j < champions.size(); ++j) {
      matrix.entries[i][j] = evaluate_chromosome(champions[j], scenarios[i], topology, seeds[i]).fitness;
    }
  }
  return matrix;
}

std::vector<IncrementalRecord> run_incremental(const ExperimentSpec& spec,
                                               const ProgressFn& progress) {
  const Topology topology = spec.topology();
  const std::uint64_t run_seed = replicate_seed(spec, 0);
  const double criterion = 0.8 * spec.acceptance_threshold;

  std::vector<Scenario> scenarios;
  std::vector<std::uint64_t> seeds;
  for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
    scenarios.push_back(strategy_scenario(spec, spec.strategies[s]));
    seeds.push_back(scenario_seed(run_seed, s));
  }

  std::vector<IncrementalRecord> records;
  std::optional<std::vector<Chromosome>> population;
  for (std::size_t k = 1; k <= scenarios.size(); ++k) {
    auto per_strategy = [&](const Chromosome& c) {
      std::vector<double> f;
      for (std::size_t s = 0; s < k; ++s) {
        f.push_back(evaluate_chromosome(c, scenarios[s], topology, seeds[s]).fitness);
      }
      return f;
    };
    const FitnessFn fitness = [&](const Chromosome& c, std::uint64_t) {
      const auto f = per_strategy(c);
      return std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(k);
    };

    IncrementalRecord record;
    record.iteration = k;
    const std::string label = "iteration" + std::to_string(k);
    EvolveOptions options;
    options.generations = spec.generations_per_iteration;
    options.seed = derive_seed(run_seed, {0x19c, k});
    options.workers = spec.workers;
    options.initial_population = population;
    options.on_generation = [&](const GenerationRecord& g, const std::vector<Individual>&) {
      if (progress) progress(label, g);
      record.generations = g.generation + 1;
      record.fitness = per_strategy(g.best);
      record.converged = std::all_of(record.fitness.begin(), record.fitness.end(),
                                     [&](double f) { return f > criterion; });
      return !record.converged;
    };
    const auto history = evolve(fitness, spec.ga, topology, options);
    record.mean = std::accumulate(record.fitness.begin(), record.fitness.end(), 0.0) /
                  static_cast<double>(record.fitness.size());
    records.push_back(record);
    if (!record.converged) break;
    population = chromosomes_of(history.final_population);
  }
  return records;
}

RateMeasurement measure_collision_rate(const Controllers& controllers, const Scenario& scenario,
                                       std::size_t duration_steps, std::uint64_t seed) {
  World world(scenario, seed);
  if (controllers.size() != world.size()) {
    throw std::invalid_argument("need one controller slot per vehicle");
  }
  for (std::size_t v = 0; v < controllers.size(); ++v) {
    if (controllers[v]) world.set_network(v, *controllers[v]);
  }
  RateMeasurement m;
  std::vector<std::size_t> hit;
  for (std::size_t s = 0; s < duration_steps; ++s) {
    hit.clear();
    for (const auto& c : world.step()) {
      if (c.responsible.empty()) continue;
      ++m.collisions;
      hit.push_back(c.event.first);
      if (c.event.kind == CollisionEvent::Kind::kVehicleVehicle) hit.push_back(c.event.second);
    }
    for (std::size_t v : hit) world.respawn(v);
  }
  m.per_second = static_cast<double>(m.collisions) /
                 (static_cast<double>(duration_steps) * scenario.dt);
  return m;
}

std::vector<Chromosome> learn_in_shared_world(const std::vector<Chromosome>& population,
                                              const Scenario& scenario, const Topology& topology,
                                              const GAConfig& ga, std::size_t generations,
                                              std::size_t lifetime_cap, std::uint64_t seed) {
  if (population.empty()) throw std::invalid_argument("shared-world learning needs a population");
  struct Learner {
    std::vector<Chromosome> chromosomes;
    std::vector<Individual> scored;
    std::size_t next = 0;
    std::size_t generation = 0;
    std::size_t lifetime = 0;
    Rng rng;
    SpinMonitor spin;
    Individual best;
    bool have_best = false;
  };

  World world(scenario, seed);
  const std::size_t n = world.size();
  std::vector<Learner> learners;
  for (std::size_t v = 0; v < n; ++v) {
    learners.push_back({population, {}, 0, 0, 0, Rng(derive_seed(seed, {0x1ea7, v})),
                        SpinMonitor(scenario.spin), {}, false});
  }
  auto install = [&](std::size_t v) {
    Learner& l = learners[v];
    const Chromosome& c = l.generation < generations ? l.chromosomes[l.next] : l.best.chromosome;
    world.set_network(v, decode(c, topology));
    // Every evaluation starts from the vehicle's own spawn pose, which is
    // where it restarts after each collision when rates are measured.
    world.respawn(v);
    l.lifetime = 0;
    l.spin.reset(world.states()[v]);
  };
  // Scores the running chromosome and moves on; breeds when a generation
  // has been fully scored.
  auto finish = [&](std::size_t v, double fitness) {
    Learner& l = learners[v];
    l.scored.push_back({l.chromosomes[l.next], fitness});
    if (!l.have_best || fitness > l.best.fitness) {
      l.best = l.scored.back();
      l.have_best = true;
    }
    if (++l.next == l.chromosomes.size()) {
      ++l.generation;
      if (l.generation < generations) l.chromosomes = next_generation(l.scored, ga, l.rng);
      l.scored.clear();
      l.next = 0;
    }
    install(v);
  };
  auto learning = [&](std::size_t v) { return learners[v].generation < generations; };

  for (std::size_t v = 0; v < n; ++v) {
    if (generations == 0) {
      learners[v].best = {population.front(), 0.0};
    }
    install(v);
  }
  std::vector<bool> blamed(n), respawn(n);
  while (std::any_of(learners.begin(), learners.end(),
                     [&](const Learner& l) { return l.generation < generations; })) {
    std::fill(blamed.begin(), blamed.end(), false);
    std::fill(respawn.begin(), respawn.end(), false);
    for (const auto& c : world.step()) {
      respawn[c.event.first] = true;
      if (c.event.kind == CollisionEvent::Kind::kVehicleVehicle) respawn[c.event.second] = true;
      for (std::size_t r : c.responsible) blamed[r] = true;
    }
    for (std::size_t v = 0; v < n; ++v) {
      Learner& l = learners[v];
      if (respawn[v]) {
        world.respawn(v);
        l.spin.reset(world.states()[v]);
      }
      if (!learning(v)) continue;
      ++l.lifetime;
      if (blamed[v]) {
        finish(v, static_cast<double>(l.lifetime - 1));
      } else if (!respawn[v] && l.spin.push(world.states()[v])) {
        finish(v, 0.0);
      } else if (l.lifetime >= lifetime_cap) {
        finish(v, static_cast<double>(lifetime_cap));
      }
    }
  }
  std::vector<Chromosome> best;
  for (const auto& l : learners) best.push_back(l.best.chromosome);
  return best;
}

CollisionRateReport broadcast_from_runs(const ExperimentSpec& spec,
                                        const std::vector<RunResult>& trained, bool population) {
  if (trained.size() != spec.strategies.size()) {
    throw std::invalid_argument("broadcast needs one trained run per strategy");
  }
  const Topology topology = spec.topology();
  CollisionRateReport report;
  for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
    const Scenario scenario = strategy_scenario(spec, spec.strategies[s]);
    const std::size_t n = scenario.vehicle_count();
    const std::uint64_t seed = trained[s].evaluation_seed;

    CollisionRateRow row;
    row.strategy = std::string(strategy_name(spec.strategies[s].kind));

    const auto random = initialize_population(spec.ga, topology, derive_seed(seed, {0xbef0}));
    Controllers before(n);
    for (std::size_t v = 0; v < n; ++v) before[v] = decode(random[v % random.size()], topology);
    row.before = measure_collision_rate(before, scenario, spec.duration_steps, seed).per_second;

    const auto champion = decode(trained[s].history.best_ever.chromosome, topology);
    const Controllers after(n, champion);
    row.champion_after = measure_collision_rate(after, scenario, spec.duration_steps, seed).per_second;

    if (population) {
      const auto learnt = learn_in_shared_world(
          chromosomes_of(trained[s].history.final_population), scenario, topology, spec.ga,
          spec.learning_generations, spec.lifetime_cap, derive_seed(seed, {0x1ea2}));
      Controllers own(n);
      for (std::size_t v = 0; v < n; ++v) own[v] = decode(learnt[v], topology);
      row.population_after =
          measure_collision_rate(own, scenario, spec.duration_steps, seed).per_second;
    }
    report.rows.push_back(row);
  }
  return report;
}

CollisionRateReport run_broadcast(const ExperimentSpec& spec, const ProgressFn& progress) {
  ExperimentSpec single = spec;
  single.replicates = 1;
  const auto trained = run_individual_ca(single, progress);
  return broadcast_from_runs(spec, trained,
                             spec.kind == ExperimentKind::kBroadcastPopulation);
}

}  // namespace evoca
