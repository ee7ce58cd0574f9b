#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evoca/neuro.hpp"
#include "evoca/random.hpp"

namespace evoca {

struct GAConfig {
  std::size_t population_size = 200;
  double mutation_probability = 0.1;
  double crossover_probability = 1.0;
  double crossover_site_mean = 0.95;
  double crossover_site_stddev = 0.05;
  std::size_t tournament_size = 10;
  double init_weight_min = -1.0;
  double init_weight_max = 1.0;
  double mutation_sigma = 0.3;

  /// Human-readable invariant violations; empty when the config is usable.
  std::vector<std::string> validate() const;
};

struct Individual {
  Chromosome chromosome;
  double fitness = 0.0;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Chromosome best;
};

struct EvolutionHistory {
  std::vector<GenerationRecord> records;
  /// Highest fitness seen over the whole run (earliest wins ties). Tracked
  /// for deployment only; it never re-enters the population.
  Individual best_ever;
  std::size_t best_ever_generation = 0;
  /// The last evaluated population.
  std::vector<Individual> final_population;
};

/// Fitness of one chromosome. The seed is derived from
/// (master seed, generation, population index); callers that need identical
/// world conditions for every candidate may ignore it.
using FitnessFn = std::function<double(const Chromosome&, std::uint64_t seed)>;

/// Called after each generation is evaluated; return false to stop early.
using GenerationCallback =
    std::function<bool(const GenerationRecord&, const std::vector<Individual>&)>;

struct EvolveOptions {
  std::size_t generations = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::optional<std::vector<Chromosome>> initial_population;
  GenerationCallback on_generation;
};

std::vector<Chromosome> initialize_population(const GAConfig& config, const Topology& topology,
                                              std::uint64_t seed);

/// Index of the tournament winner: `tournament_size` distinct individuals
/// drawn uniformly, highest fitness wins, lowest index breaks ties.
std::size_t tournament_select_index(const std::vector<Individual>& population,
                                    const GAConfig& config, Rng& rng);
const Individual& tournament_select(const std::vector<Individual>& population,
                                    const GAConfig& config, Rng& rng);

/// Splice point for a site fraction: round(clamp(f,0,1) * L) clamped to [1, L-1].
std::size_t crossover_site(double fraction, std::size_t length);

/// child1 = a[0,k) ++ b[k,L), child2 = b[0,k) ++ a[k,L).
std::pair<Chromosome, Chromosome> splice(const Chromosome& a, const Chromosome& b,
                                         std::size_t site);

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            const GAConfig& config, Rng& rng);

Chromosome mutate(Chromosome chromosome, const GAConfig& config, Rng& rng);

/// Full generational replacement: no parent survives.
std::vector<Chromosome> next_generation(const std::vector<Individual>& population,
                                        const GAConfig& config, Rng& rng);

/// Scores every chromosome, fanning out over `workers` threads. Seeds are
/// derived per index so the result is independent of the worker count.
/// Throws std::runtime_error if any fitness is negative or non-finite.
std::vector<Individual> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                            const FitnessFn& fitness, std::uint64_t seed,
                                            std::size_t generation, std::size_t workers);

EvolutionHistory evolve(const FitnessFn& fitness, const GAConfig& config,
                        const Topology& topology, const EvolveOptions& options);

}  // namespace evoca
