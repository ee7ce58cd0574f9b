#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoca/evolution.hpp"
#include "evoca/world.hpp"

namespace evoca {

enum class ExperimentKind {
  kNavigation,
  kSensorSweep,
  kIndividualCa,
  kCrossEval,
  kIncremental,
  kBroadcastChampion,
  kBroadcastPopulation,
};

std::string_view experiment_name(ExperimentKind kind);
/// Throws std::invalid_argument for an unknown name.
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kNavigation;
  /// Base scenario. Track experiments use it as is; strategy experiments
  /// replace the opponents through `strategy_scenario`.
  Scenario scenario;
  /// Arena geometry for strategy experiments.
  ArenaLayout arena;
  std::vector<std::size_t> hidden{6};
  GAConfig ga;
  std::size_t generations = 60;
  /// Master seed; replicate r runs with derive_seed(seed, {r}).
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  std::size_t workers = 1;

  // sensor-sweep
  std::vector<std::size_t> beam_counts{1, 3, 5, 7, 9};
  /// Fitness counted as "learnt" when reporting generations-to-acceptance.
  double acceptance_fitness = 0.0;

  // individual-ca, cross-eval, incremental, broadcast
  std::vector<StrategySpec> strategies;

  // incremental
  double acceptance_threshold = 0.0;
  std::size_t generations_per_iteration = 50;

  // broadcast
  std::size_t duration_steps = 2000;
  /// Generations every vehicle runs during shared-world learning.
  std::size_t learning_generations = 20;
  /// Longest lifetime credited to one chromosome during shared-world learning.
  std::size_t lifetime_cap = 1000;

  Topology topology() const;
  Topology topology(std::size_t beam_count) const;
  /// Collects every consistency problem; empty when the experiment can run.
  std::vector<std::string> validate() const;
};

std::uint64_t replicate_seed(const ExperimentSpec& spec, std::size_t replicate);
/// World seed used for every evaluation of strategy `strategy` in a run.
/// All candidates see the same reset world.
std::uint64_t scenario_seed(std::uint64_t run_seed, std::size_t strategy);
/// Arena scenario with every opponent following `strategy`.
Scenario strategy_scenario(const ExperimentSpec& spec, const StrategySpec& strategy);

/// Progress hook: (label, generation record).
using ProgressFn = std::function<void(const std::string&, const GenerationRecord&)>;

struct RunResult {
  std::string label;
  std::uint64_t seed = 0;
  /// World seed the fitness was measured with.
  std::uint64_t evaluation_seed = 0;
  Topology topology;
  EvolutionHistory history;
};

/// Evolves a controller for one scenario with a fixed world seed.
RunResult train_on_scenario(const Scenario& scenario, const Topology& topology,
                            const GAConfig& ga, std::size_t generations, std::uint64_t run_seed,
                            std::uint64_t evaluation_seed, std::size_t workers,
                            const std::string& label, const ProgressFn& progress = {},
                            std::optional<std::vector<Chromosome>> initial = std::nullopt);

std::vector<RunResult> run_navigation(const ExperimentSpec& spec, const ProgressFn& progress = {});

struct SweepResult {
  std::size_t beam_count = 0;
  std::vector<RunResult> runs;
};
std::vector<SweepResult> run_sensor_sweep(const ExperimentSpec& spec,
                                          const ProgressFn& progress = {});

/// Runs for strategy `s`, replicate `r`, stored at index s * replicates + r.
std::vector<RunResult> run_individual_ca(const ExperimentSpec& spec,
                                         const ProgressFn& progress = {});

/// rows = deployment strategy, columns = training strategy.
struct CrossStrategyMatrix {
  std::vector<std::vector<double>> entries;
  std::size_t size() const { return entries.size(); }
  bool diagonal_dominant() const;
};

/// Entry (i, j): fitness of champions[j] in scenarios[i] at seeds[i].
CrossStrategyMatrix cross_evaluate(const std::vector<Chromosome>& champions,
                                   const std::vector<Scenario>& scenarios,
                                   const std::vector<std::uint64_t>& seeds,
                                   const Topology& topology);

struct IncrementalRecord {
  std::size_t iteration = 0;
  /// Fitness of the iteration's best chromosome on strategies 0..iteration.
  std::vector<double> fitness;
  double mean = 0.0;
  std::size_t generations = 0;
  bool converged = false;
};
std::vector<IncrementalRecord> run_incremental(const ExperimentSpec& spec,
                                               const ProgressFn& progress = {});

/// One controller per vehicle; nullopt keeps the scenario's scripted strategy.
using Controllers = std::vector<std::optional<FeedforwardNetwork>>;

struct RateMeasurement {
  std::size_t collisions = 0;
  double per_second = 0.0;
};

/// Runs the closed world for `duration_steps`, counting every collision with
/// a responsible party. Participants respawn after each event.
RateMeasurement measure_collision_rate(const Controllers& controllers, const Scenario& scenario,
                                       std::size_t duration_steps, std::uint64_t seed);

/// Continued per-vehicle learning in one shared world: every vehicle runs
/// its own GA from a copy of `population`, evaluating its chromosomes in
/// turn from its spawn pose. Returns each vehicle's best chromosome.
std::vector<Chromosome> learn_in_shared_world(const std::vector<Chromosome>& population,
                                              const Scenario& scenario, const Topology& topology,
                                              const GAConfig& ga, std::size_t generations,
                                              std::size_t lifetime_cap, std::uint64_t seed);

struct CollisionRateRow {
  std::string strategy;
  double before = 0.0;
  double champion_after = 0.0;
  std::optional<double> population_after;
};
struct CollisionRateReport {
  std::vector<CollisionRateRow> rows;
};

/// Trains a champion per strategy, then measures rates with all vehicles
/// network-driven: random chromosomes before, the champion after and (for
/// population broadcast) each vehicle's continued-learning best.
CollisionRateReport run_broadcast(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// Same as `run_broadcast` with the per-strategy training already done.
CollisionRateReport broadcast_from_runs(const ExperimentSpec& spec,
                                        const std::vector<RunResult>& trained,
                                        bool population);

}  // namespace evoca
