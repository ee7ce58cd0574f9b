#include "evoca/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace evoca {

std::vector<std::string> GAConfig::validate() const {
  std::vector<std::string> errors;
  auto check_probability = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) errors.push_back(std::string(name) + " must be in [0, 1]");
  };
  if (population_size < 2 || population_size % 2 != 0) {
    errors.push_back("population_size must be even and at least 2");
  }
  if (tournament_size < 1) errors.push_back("tournament_size must be at least 1");
  if (population_size < 2 * tournament_size) {
    errors.push_back("population_size must be at least 2 * tournament_size");
  }
  check_probability(mutation_probability, "mutation_probability");
  check_probability(crossover_probability, "crossover_probability");
  check_probability(crossover_site_mean, "crossover_site_mean");
  if (!(crossover_site_stddev > 0.0)) errors.push_back("crossover_site_stddev must be > 0");
  if (!(mutation_sigma >= 0.0)) errors.push_back("mutation_sigma must be >= 0");
  if (!(init_weight_min <= init_weight_max)) {
    errors.push_back("init_weight_range must satisfy min <= max");
  }
  return errors;
}

std::vector<Chromosome> initialize_population(const GAConfig& config, const Topology& topology,
                                              std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x1417}));
  const std::size_t length = chromosome_length(topology);
  const double lo = config.init_weight_min;
  const double span = config.init_weight_max - config.init_weight_min;
  std::vector<Chromosome> population(config.population_size);
  for (auto& c : population) {
    c.genes.resize(length);
    for (auto& g : c.genes) g = lo + span * unit_uniform(rng());
  }
  return population;
}

std::size_t tournament_select_index(const std::vector<Individual>& population,
                                    const GAConfig& config, Rng& rng) {
  const std::size_t n = population.size();
  const std::size_t k = std::min(config.tournament_size, n);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::size_t winner = n;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
    const std::size_t candidate = pool[i];
    if (winner == n || population[candidate].fitness > population[winner].fitness ||
        (population[candidate].fitness == population[winner].fitness && candidate < winner)) {
      winner = candidate;
    }
  }
  return winner;
}

const Individual& tournament_select(const std::vector<Individual>& population,
                                    const GAConfig& config, Rng& rng) {
  return population[tournament_select_index(population, config, rng)];
}

std::size_t crossover_site(double fraction, std::size_t length) {
  const double f = std::clamp(fraction, 0.0, 1.0);
  const auto site = static_cast<std::size_t>(std::llround(f * static_cast<double>(length)));
  return std::clamp<std::size_t>(site, 1, length - 1);
}

std::pair<Chromosome, Chromosome> splice(const Chromosome& a, const Chromosome& b,
                                         std::size_t site) {
  Chromosome first = a;
  Chromosome second = b;
  for (std::size_t i = site; i < a.size(); ++i) std::swap(first.genes[i], second.genes[i]);
  return {std::move(first), std::move(second)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            const GAConfig& config, Rng& rng) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("crossover parents differ in length: " +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw std::invalid_argument("crossover needs chromosomes of length >= 2");
  const double u = unit_uniform(rng());
  std::normal_distribution<double> site_fraction(config.crossover_site_mean,
                                                 config.crossover_site_stddev);
  const double f = site_fraction(rng);
  if (u >= config.crossover_probability) return {a, b};
  return splice(a, b, crossover_site(f, a.size()));
}

Chromosome mutate(Chromosome chromosome, const GAConfig& config, Rng& rng) {
  std::normal_distribution<double> noise(0.0, config.mutation_sigma);
  for (auto& g : chromosome.genes) {
    if (unit_uniform(rng()) < config.mutation_probability) g += noise(rng);
  }
  return chromosome;
}

std::vector<Chromosome> next_generation(const std::vector<Individual>& population,
                                        const GAConfig& config, Rng& rng) {
  std::vector<Chromosome> children;
  children.reserve(config.population_size);
  while (children.size() < config.population_size) {
    const auto& mother = tournament_select(population, config, rng);
    const auto& father = tournament_select(population, config, rng);
    auto [first, second] = crossover(mother.chromosome, father.chromosome, config, rng);
    children.push_back(mutate(std::move(first), config, rng));
    if (children.size() < config.population_size) {
      children.push_back(mutate(std::move(second), config, rng));
    }
  }
  return children;
}

std::vector<Individual> evaluate_population(const std::vector<Chromosome>& chromosomes,
                                            const FitnessFn& fitness, std::uint64_t seed,
                                            std::size_t generation, std::size_t workers) {
  std::vector<Individual> scored(chromosomes.size());
  auto score = [&](std::size_t i) {
    scored[i].chromosome = chromosomes[i];
    scored[i].fitness = fitness(chromosomes[i], derive_seed(seed, {generation, i}));
  };

  workers = std::max<std::size_t>(1, std::min(workers, chromosomes.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < chromosomes.size(); ++i) score(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < chromosomes.size(); i = next++) {
          try {
            score(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < scored.size(); ++i) {
    const double f = scored[i].fitness;
    if (!std::isfinite(f) || f < 0.0) {
      std::ostringstream msg;
      msg << "fitness function returned " << f << " for individual " << i << " in generation "
          << generation << "; fitness must be finite and non-negative";
      throw std::runtime_error(msg.str());
    }
  }
  return scored;
}

EvolutionHistory evolve(const FitnessFn& fitness, const GAConfig& config,
                        const Topology& topology, const EvolveOptions& options) {
  if (options.generations < 1) throw std::invalid_argument("evolve needs at least 1 generation");
  if (auto errors = config.validate(); !errors.empty()) {
    throw std::invalid_argument("invalid GA config: " + errors.front());
  }

  std::vector<Chromosome> population = options.initial_population
                                           ? *options.initial_population
                                           : initialize_population(config, topology, options.seed);
  const std::size_t length = chromosome_length(topology);
  for (const auto& c : population) {
    if (c.size() != length) {
      throw std::invalid_argument("initial population chromosome has " +
                                  std::to_string(c.size()) + " genes, topology needs " +
                                  std::to_string(length));
    }
  }
  if (population.size() != config.population_size) {
    throw std::invalid_argument("initial population size does not match population_size");
  }

  Rng breeder(derive_seed(options.seed, {0xb4eed}));
  EvolutionHistory history;
  bool have_best = false;

  for (std::size_t g = 0; g < options.generations; ++g) {
    auto scored = evaluate_population(population, fitness, options.seed, g, options.workers);

    GenerationRecord record;
    record.generation = g;
    std::size_t best = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      total += scored[i].fitness;
      if (scored[i].fitness > scored[best].fitness) best = i;
    }
    record.best_fitness = scored[best].fitness;
    record.mean_fitness = total / static_cast<double>(scored.size());
    record.best = scored[best].chromosome;

    if (!have_best || record.best_fitness > history.best_ever.fitness) {
      history.best_ever = scored[best];
      history.best_ever_generation = g;
      have_best = true;
    }
    history.records.push_back(record);

    const bool keep_going = !options.on_generation || options.on_generation(record, scored);
    const bool last = g + 1 == options.generations || !keep_going;
    if (last) {
      history.final_population = std::move(scored);
      break;
    }
    population = next_generation(scored, config, breeder);
  }
  return history;
}

}  // namespace evoca
