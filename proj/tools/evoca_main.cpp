// evoca: command-line driver for the evolved collision-avoidance experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "evoca/config.hpp"
#include "evoca/experiments.hpp"
#include "evoca/output.hpp"

namespace fs = std::filesystem;
using namespace evoca;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  bool trace = false;
  std::string weights;
  std::size_t strategy = 0;
};

class Writer {
 public:
  Writer(fs::path dir, std::uint64_t hash, std::uint64_t seed)
      : dir_(std::move(dir)), header_(output_header(hash, seed)) {}

  void write(const std::string& name, const std::string& body) const {
    write_atomic(dir_ / name, header_ + body);
    std::fprintf(stderr, "wrote %s\n", (dir_ / name).c_str());
  }

 private:
  fs::path dir_;
  std::string header_;
};

void print_progress(const std::string& label, const GenerationRecord& r) {
  std::fprintf(stderr, "[%s] generation %zu best %s mean %s\n", label.c_str(), r.generation,
               format_number(r.best_fitness).c_str(), format_number(r.mean_fitness).c_str());
}

void write_run(const Writer& out, const RunResult& run, const Scenario& scenario, bool trace) {
  out.write("curves_" + run.label + ".csv", format_curve(run.history));
  out.write("champion_" + run.label + ".weights",
            format_weights(run.topology, run.history.best_ever.chromosome));
  if (trace) {
    const auto replay = evaluate_chromosome(run.history.best_ever.chromosome, scenario,
                                            run.topology, run.evaluation_seed, true);
    out.write("trace_" + run.label + ".csv", format_trace(replay.trace));
  }
}

std::vector<std::string> strategy_names(const ExperimentSpec& spec) {
  std::vector<std::string> names;
  for (const auto& s : spec.strategies) names.emplace_back(strategy_name(s.kind));
  return names;
}

void require_kind(const ExperimentSpec& spec, std::initializer_list<ExperimentKind> allowed,
                  const std::string& command) {
  for (auto k : allowed) {
    if (spec.kind == k) return;
  }
  throw ConfigError({"kind: '" + std::string(experiment_name(spec.kind)) +
                     "' cannot be run by the '" + command + "' command"});
}

LoadedConfig load(const Options& o) {
  LoadedConfig loaded = load_config(o.config);
  if (o.seed) loaded.spec.seed = *o.seed;
  if (o.workers) {
    if (*o.workers == 0) throw ConfigError({"--workers: must be positive"});
    loaded.spec.workers = *o.workers;
  }
  return loaded;
}

int run_command(const std::string& command, const Options& o) {
  const LoadedConfig loaded = load(o);
  const ExperimentSpec& spec = loaded.spec;
  if (command == "validate") {
    std::printf("ok: %s experiment\n", std::string(experiment_name(spec.kind)).c_str());
    return 0;
  }

  fs::create_directories(o.out);
  const Writer out(o.out, loaded.hash, spec.seed);

  if (command == "train") {
    require_kind(spec, {ExperimentKind::kNavigation, ExperimentKind::kIndividualCa}, command);
    if (spec.kind == ExperimentKind::kNavigation) {
      for (const auto& run : run_navigation(spec, print_progress)) {
        write_run(out, run, spec.scenario, o.trace);
      }
    } else {
      const auto runs = run_individual_ca(spec, print_progress);
      for (std::size_t i = 0; i < runs.size(); ++i) {
        write_run(out, runs[i], strategy_scenario(spec, spec.strategies[i / spec.replicates]),
                  o.trace);
      }
    }
  } else if (command == "sweep") {
    require_kind(spec, {ExperimentKind::kSensorSweep}, command);
    for (const auto& sweep : run_sensor_sweep(spec, print_progress)) {
      Scenario scenario = spec.scenario;
      scenario.sensor.beam_count = sweep.beam_count;
      for (const auto& run : sweep.runs) write_run(out, run, scenario, o.trace);
    }
  } else if (command == "cross-eval") {
    require_kind(spec, {ExperimentKind::kCrossEval}, command);
    ExperimentSpec single = spec;
    single.replicates = 1;
    const auto runs = run_individual_ca(single, print_progress);
    std::vector<Chromosome> champions;
    std::vector<Scenario> scenarios;
    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < runs.size(); ++s) {
      scenarios.push_back(strategy_scenario(spec, spec.strategies[s]));
      write_run(out, runs[s], scenarios.back(), o.trace);
      champions.push_back(runs[s].history.best_ever.chromosome);
      seeds.push_back(runs[s].evaluation_seed);
    }
    const auto matrix = cross_evaluate(champions, scenarios, seeds, spec.topology());
    out.write("matrix.csv", format_matrix(matrix, strategy_names(spec)));
  } else if (command == "incremental") {
    require_kind(spec, {ExperimentKind::kIncremental}, command);
    const auto records = run_incremental(spec, print_progress);
    out.write("incremental.csv", format_incremental(records, strategy_names(spec)));
    if (records.empty() || !records.back().converged ||
        records.size() != spec.strategies.size()) {
      std::fprintf(stderr, "warning: incremental evolution stopped before covering every strategy\n");
    }
  } else if (command == "broadcast") {
    require_kind(spec, {ExperimentKind::kBroadcastChampion, ExperimentKind::kBroadcastPopulation},
                 command);
    out.write("rates.csv", format_rates(run_broadcast(spec, print_progress)));
  } else if (command == "replay") {
    std::ifstream in(o.weights);
    if (!in) throw ConfigError({"--weights: cannot open " + o.weights});
    std::ostringstream text;
    text << in.rdbuf();
    const auto [topology, chromosome] = parse_weights(text.str());
    const std::uint64_t run_seed = replicate_seed(spec, 0);
    Scenario scenario = spec.scenario;
    std::size_t strategy = 0;
    if (spec.kind != ExperimentKind::kNavigation && spec.kind != ExperimentKind::kSensorSweep) {
      if (o.strategy >= spec.strategies.size()) throw ConfigError({"--strategy: out of range"});
      strategy = o.strategy;
      scenario = strategy_scenario(spec, spec.strategies[strategy]);
    }
    scenario.sensor.beam_count = topology.input_size();
    const auto result =
        evaluate_chromosome(chromosome, scenario, topology, scenario_seed(run_seed, strategy), true);
    std::fprintf(stderr, "fitness %s (%s)\n", format_number(result.fitness).c_str(),
                 std::string(termination_name(result.termination)).c_str());
    out.write("trace_" + fs::path(o.weights).stem().string() + ".csv", format_trace(result.trace));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuroevolution of reactive collision avoidance for simulated vehicles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EVOCA_VERSION);

  Options o;
  const char* commands[][2] = {
      {"train", "navigation or single-strategy collision-avoidance runs"},
      {"sweep", "sensor-resolution sweep"},
      {"cross-eval", "train one champion per strategy and cross-evaluate them"},
      {"incremental", "incremental evolution over a growing strategy set"},
      {"broadcast", "collision rates before and after broadcasting"},
      {"replay", "re-simulate a stored champion and write its trace"},
      {"validate", "check a configuration and exit"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "experiment configuration (JSON)")->required();
    if (std::string(name) == "validate") continue;
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed (overrides the config)");
    sub->add_option("--workers", o.workers, "parallel fitness evaluations");
    sub->add_flag("--trace", o.trace, "also write replay traces");
    if (std::string(name) == "replay") {
      sub->add_option("--weights", o.weights, "champion weights file")->required();
      sub->add_option("--strategy", o.strategy, "strategy index for arena experiments");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run_command(command, o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
