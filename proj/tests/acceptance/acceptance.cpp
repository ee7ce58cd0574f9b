// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance [criterion...] [--cli <path to evoca>]
//
// With no criteria every one is run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "evoca/config.hpp"
#include "evoca/evolution.hpp"
#include "evoca/experiments.hpp"
#include "evoca/output.hpp"
#include "evoca/sensor.hpp"
#include "evoca/spin.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

namespace fs = std::filesystem;
using namespace evoca;

namespace {

const fs::path kSource = EVOCA_SOURCE_DIR;
std::string g_cli;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ExperimentSpec acceptance_spec(const std::string& name) {
  return load_config(kSource / "configs" / "acceptance" / name).spec;
}

void progress(const std::string& label, const GenerationRecord& r) {
  if (r.generation % 10 == 0) {
    std::fprintf(stderr, "  [%s] generation %zu best %g\n", label.c_str(), r.generation,
                 r.best_fitness);
  }
}

Topology random_topology(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(1, 12), hidden(1, 3);
  std::vector<std::size_t> layers{size(rng)};
  for (std::size_t h = hidden(rng); h > 0; --h) layers.push_back(size(rng));
  layers.push_back(2);
  return Topology(layers);
}

Outcome codec_exactness() {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> gene(0.0, 4.0);
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const Topology topology = random_topology(rng);
    Chromosome c;
    for (std::size_t i = 0; i < chromosome_length(topology); ++i) c.genes.push_back(gene(rng));
    const auto net = decode(c, topology);
    if (!(encode(net) == c)) ++failures;
    if (!(decode(encode(net), topology) == net)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " mismatches over 1000 round trips"};
}

Outcome forward_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> weight(-3.0, 3.0), input(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Topology topology = random_topology(rng);
    Chromosome c;
    for (std::size_t i = 0; i < chromosome_length(topology); ++i) c.genes.push_back(weight(rng));
    std::vector<double> in(topology.input_size());
    for (auto& x : in) x = input(rng);
    const auto got = decode(c, topology).forward(in);
    const auto want = oracle::forward(c.genes, topology.layers(), in);
    for (std::size_t k = 0; k < 2; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
  }
  return {worst <= 1e-12, "max |error| " + fmt(worst) + " over 100 networks"};
}

Outcome kinematics() {
  VehicleState v;
  const double steer = 0.2;
  const double expected = v.wheelbase / std::tan(steer);
  std::vector<double> errors;
  for (double dt : {0.05, 0.025, 0.0125}) {
    VehicleState s = v;
    std::vector<Vec2> points{s.position};
    const auto steps = static_cast<int>(std::lround(2.0 / dt));
    for (int k = 0; k < steps; ++k) points.push_back((s = step_vehicle(s, steer, dt)).position);
    errors.push_back(std::abs(
        oracle::circumradius(points.front(), points[points.size() / 2], points.back()) - expected));
  }
  const bool halving = errors[1] <= 0.5 * errors[0] && errors[2] <= 0.5 * errors[1];

  VehicleState straight;
  straight.heading = 0.7;
  bool exact = true;
  VehicleState s = straight;
  for (int k = 0; k < 1000; ++k) {
    s = step_vehicle(s, 0.0, 0.05);
    exact &= s.heading == straight.heading;
  }
  const double off_line = std::abs(-std::sin(0.7) * s.position.x + std::cos(0.7) * s.position.y);
  exact &= off_line < 1e-9;
  return {halving && exact, "radius errors " + fmt(errors[0]) + ", " + fmt(errors[1]) + ", " +
                                fmt(errors[2]) + "; straight line deviation " + fmt(off_line)};
}

Outcome raycast_oracle() {
  std::mt19937_64 rng(404);
  RangefinderConfig config;
  config.beam_count = 5;
  const auto offsets = beam_offsets(config);
  double worst = 0.0;
  for (int scene = 0; scene < 500; ++scene) {
    const auto s = testing::random_scene(rng);
    const auto got = sense(s.ego, s.environment, s.others, config);
    std::vector<oracle::Rect> rects;
    for (const auto& o : s.others) rects.push_back(oracle::rect_of(o));
    for (std::size_t b = 0; b < offsets.size(); ++b) {
      const double want = oracle::march_ray(s.ego.position, s.ego.heading + offsets[b],
                                            s.environment.walls, rects, config.max_range);
      worst = std::max(worst, std::abs(got[b] * config.max_range - want));
    }
  }
  return {worst <= 0.002, "max beam error " + fmt(worst * 1000.0) + " mm over 500 scenes"};
}

Outcome responsibility_oracle() {
  std::mt19937_64 rng(505);
  int checked = 0, mismatches = 0;
  int both = 0, single = 0;
  while (checked < 200) {
    const auto step = testing::random_two_vehicle_step(rng);
    if (!step) continue;
    const auto& [prev, curr] = *step;
    const auto blamed =
        responsible_parties(prev, curr, {CollisionEvent::Kind::kVehicleVehicle, 0, 1});
    const auto want = oracle::blame_two(prev[0], curr[0], prev[1], curr[1]);
    const bool got0 = std::count(blamed.begin(), blamed.end(), 0) > 0;
    const bool got1 = std::count(blamed.begin(), blamed.end(), 1) > 0;
    mismatches += (got0 != want[0]) || (got1 != want[1]);
    both += want[0] && want[1];
    single += want[0] != want[1];
    ++checked;
  }

  // Head-on: each alone still closes the gap.
  VehicleState left, right, parked, mover;
  right.position = {4.3, 0};
  right.heading = kPi;
  const std::vector<VehicleState> hp{left, right};
  const std::vector<VehicleState> hc{step_vehicle(left, 0, 0.05), step_vehicle(right, 0, 0.05)};
  const auto head_on = responsible_parties(hp, hc, {CollisionEvent::Kind::kVehicleVehicle, 0, 1});
  // Strike a stationary vehicle.
  parked.position = {4.5, 0};
  parked.speed = 0.0;
  const std::vector<VehicleState> sp{mover, parked};
  const std::vector<VehicleState> sc{step_vehicle(mover, 0, 0.1), parked};
  const auto strike = responsible_parties(sp, sc, {CollisionEvent::Kind::kVehicleVehicle, 0, 1});

  const bool cases = head_on == std::vector<std::size_t>{0, 1} &&
                     strike == std::vector<std::size_t>{0};
  return {mismatches == 0 && cases,
          std::to_string(mismatches) + " mismatches over 200 steps (" + std::to_string(both) +
              " both-blamed, " + std::to_string(single) + " single-blamed); head-on " +
              (head_on.size() == 2 ? "both" : "WRONG") + ", stationary strike " +
              (strike == std::vector<std::size_t>{0} ? "mover" : "WRONG")};
}

Outcome operator_statistics() {
  GAConfig config;
  Rng rng(606);
  const Chromosome zeros{std::vector<double>(100000, 0.0)};
  const auto mutated = mutate(zeros, config, rng);
  const double rate =
      std::count_if(mutated.genes.begin(), mutated.genes.end(), [](double g) { return g != 0.0; }) /
      1e5;

  std::vector<Individual> pop(200);
  std::vector<double> fitness(200);
  std::iota(fitness.begin(), fitness.end(), 0.0);
  std::shuffle(fitness.begin(), fitness.end(), rng);
  for (std::size_t i = 0; i < 200; ++i) pop[i].fitness = fitness[i];
  const auto best = static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) -
                                             fitness.begin());
  int hits = 0;
  for (int t = 0; t < 10000; ++t) hits += tournament_select_index(pop, config, rng) == best;
  const double freq = hits / 1e4;
  return {rate >= 0.094 && rate <= 0.106 && std::abs(freq - 0.05) <= 0.01,
          "mutation rate " + fmt(rate) + ", best-selection frequency " + fmt(freq)};
}

Outcome navigation_learning() {
  const auto spec = acceptance_spec("navigation.json");
  const auto runs = run_navigation(spec, progress);
  std::vector<double> first, last;
  bool capped = false;
  std::string curves;
  for (const auto& run : runs) {
    first.push_back(run.history.records.front().best_fitness);
    last.push_back(run.history.records.back().best_fitness);
    for (const auto& r : run.history.records) {
      capped |= r.best_fitness >= static_cast<double>(spec.scenario.max_steps);
    }
    curves += " " + fmt(first.back()) + "->" + fmt(last.back());
  }
  const double ratio = median(last) / median(first);
  return {ratio >= 20.0 && capped,
          "median final/gen0 best " + fmt(ratio) + " (need >= 20), cap " +
              std::to_string(spec.scenario.max_steps) + (capped ? " reached" : " NOT reached") +
              "; runs:" + curves};
}

Outcome sensor_sweep() {
  const auto spec = acceptance_spec("sweep.json");
  const auto sweeps = run_sensor_sweep(spec, progress);
  std::map<std::size_t, double> final_best;
  std::string detail;
  for (const auto& s : sweeps) {
    std::vector<double> last;
    for (const auto& run : s.runs) last.push_back(run.history.records.back().best_fitness);
    final_best[s.beam_count] = median(last);
    detail += " " + std::to_string(s.beam_count) + " beams: " + fmt(final_best[s.beam_count]) + ";";
  }
  if (!final_best.count(1) || !final_best.count(5)) return {false, "sweep must include 1 and 5 beams"};
  return {final_best[1] < 0.5 * final_best[5], "median final best," + detail};
}

Outcome spin_penalty() {
  // Constant full-left steering in the open arena.
  const auto spec = acceptance_spec("individual_ca.json");
  ExperimentSpec open_spec = spec;
  open_spec.arena.opponents = 0;
  const Scenario arena = strategy_scenario(open_spec, spec.strategies.front());
  const Topology topology = spec.topology();
  Chromosome spinner{std::vector<double>(chromosome_length(topology), 0.0)};
  spinner.genes[spinner.size() - 2] = 50.0;
  spinner.genes[spinner.size() - 1] = -50.0;
  const auto spun = evaluate_chromosome(spinner, arena, topology, 1);

  // Scripted U-turns of several radii at the first dead end of the wide
  // track. The car hugs the right wall and turns left.
  const Environment track = load_track(kSource / "tracks" / "wide.track");
  int penalised = 0, crashed = 0, turned = 0;
  std::string radii;
  for (double radius : {4.5, 5.5, 6.5}) {
    VehicleState v;
    v.heading = normalize_angle(track.start->heading + kPi);
    v.position = track.start->position + unit_vector(track.start->heading) * 20.0;
    RangefinderConfig sides;
    sides.beam_count = 2;
    const double right_gap = sense(v, track, {}, sides)[0] * sides.max_range;
    v.position = v.position + unit_vector(v.heading - kPi / 2) * (right_gap - 2.5);
    const double outer = std::hypot(radius + 0.5 * v.body_width, 0.5 * v.body_length);

    SpinMonitor monitor(SpinConfig{});
    monitor.reset(v);
    const double target = normalize_angle(v.heading + kPi);
    RangefinderConfig front;
    front.beam_count = 1;
    // Drive in, turn, then 30 m back out so the spin window covers the turn.
    bool turning = false, done = false;
    int after = 0;
    for (int k = 0; k < 1200 && after < 60; ++k) {
      after += done;
      double steer = 0.0;
      if (!turning && sense(v, track, {}, front)[0] * front.max_range < outer + 1.0) turning = true;
      if (turning && !done) {
        steer = steering_for_radius(v.wheelbase, radius);
        if (std::abs(normalize_angle(v.heading - target)) < 0.02) done = true;
      }
      v = step_vehicle(v, steer, 0.05);
      const std::vector<VehicleState> one{v};
      if (!detect_collisions(one, track).empty()) {
        ++crashed;
        break;
      }
      if (monitor.push(v)) {
        ++penalised;
        break;
      }
    }
    turned += done;
    radii += " " + fmt(radius);
  }
  const bool pass = spun.fitness == 0.0 && spun.termination == Termination::kSpinPenalty &&
                    penalised == 0 && crashed == 0 && turned == 3;
  return {pass, "spinning chromosome fitness " + fmt(spun.fitness) + " (" +
                    std::string(termination_name(spun.termination)) + "); U-turns at radii" +
                    radii + ": " + std::to_string(turned) + " completed, " +
                    std::to_string(penalised) + " spin-penalised, " + std::to_string(crashed) +
                    " crashed"};
}

std::string matrix_text(const CrossStrategyMatrix& m) {
  std::string out;
  for (const auto& row : m.entries) {
    out += " [";
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " " : "") + fmt(row[j], 6);
    out += "]";
  }
  return out;
}

Outcome cross_strategy() {
  const auto spec = acceptance_spec("cross_eval.json");
  ExperimentSpec single = spec;
  single.replicates = 1;
  const auto runs = run_individual_ca(single, progress);
  std::vector<Chromosome> champions;
  std::vector<Scenario> scenarios;
  std::vector<std::uint64_t> seeds;
  bool reproduces = true;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    champions.push_back(runs[s].history.best_ever.chromosome);
    scenarios.push_back(strategy_scenario(spec, spec.strategies[s]));
    seeds.push_back(runs[s].evaluation_seed);
  }
  const auto matrix = cross_evaluate(champions, scenarios, seeds, spec.topology());
  for (std::size_t s = 0; s < runs.size(); ++s) {
    reproduces &= matrix.entries[s][s] == runs[s].history.best_ever.fitness;
  }
  return {matrix.diagonal_dominant() && reproduces,
          std::string("rows deployed, columns trained:") + matrix_text(matrix) +
              (reproduces ? "" : " (diagonal does not reproduce training fitness)")};
}

Outcome incremental() {
  const auto spec = acceptance_spec("incremental.json");
  const auto records = run_incremental(spec, progress);
  const double criterion = 0.8 * spec.acceptance_threshold;
  std::string detail;
  for (const auto& r : records) {
    detail += " it" + std::to_string(r.iteration) + "(" + std::to_string(r.generations) + " gen):";
    for (double f : r.fitness) detail += " " + fmt(f, 6);
  }
  bool pass = records.size() == spec.strategies.size() && records.back().converged;
  if (pass) {
    for (double f : records.back().fitness) pass &= f >= criterion;
  }
  return {pass, "criterion " + fmt(criterion, 6) + ";" + detail};
}

Outcome broadcast() {
  const auto spec = acceptance_spec("broadcast.json");
  const auto report = run_broadcast(spec, progress);
  double reduction = 0.0, champion = 0.0, population = 0.0;
  std::string detail;
  for (const auto& row : report.rows) {
    const double after = row.population_after.value_or(row.before);
    reduction += row.before > 0.0 ? 1.0 - after / row.before : 0.0;
    champion += row.champion_after;
    population += after;
    detail += " " + row.strategy + " " + fmt(row.before) + "/" + fmt(row.champion_after) + "/" +
              fmt(after) + ";";
  }
  const double n = static_cast<double>(report.rows.size());
  reduction /= n;
  champion /= n;
  population /= n;
  return {reduction >= 0.5 && population <= champion,
          "mean reduction " + fmt(100.0 * reduction) + "% (need >= 50%), mean after-rate population " +
              fmt(population) + " vs champion " + fmt(champion) +
              "; per strategy before/champion/population collisions/s:" + detail};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism() {
  if (g_cli.empty()) return {false, "needs --cli <path to evoca>"};
  const fs::path scratch = fs::temp_directory_path() / "evoca_acceptance_determinism";
  fs::remove_all(scratch);
  struct Job {
    std::string command, config;
  };
  const Job jobs[] = {{"train", "determinism_navigation.json"},
                      {"sweep", "determinism_sweep.json"},
                      {"broadcast", "determinism_broadcast.json"}};
  std::string detail;
  bool pass = true;
  for (const auto& job : jobs) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (const char* workers : {"1", "4", "1"}) {
      const fs::path out = scratch / (job.config + "_" + workers + std::to_string(outputs.size()));
      const std::string cmd = g_cli + " " + job.command + " --config " +
                              (kSource / "configs" / "acceptance" / job.config).string() +
                              " --out " + out.string() + " --workers " + workers +
                              " --trace 2>/dev/null";
      const int status = std::system(cmd.c_str());
      if (WEXITSTATUS(status) != 0) return {false, job.config + ": evoca exited with an error"};
      outputs.push_back(read_dir(out));
    }
    const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
    pass &= same;
    detail += " " + job.config + ": " + std::to_string(outputs[0].size()) + " files " +
              (same ? "identical" : "DIFFER") + " across 3 runs (workers 1, 4, 1);";
  }
  fs::remove_all(scratch);
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"codec exactness", codec_exactness}},
      {2, {"forward-pass oracle", forward_oracle}},
      {3, {"kinematics", kinematics}},
      {4, {"raycast oracle", raycast_oracle}},
      {5, {"responsibility oracle", responsibility_oracle}},
      {6, {"operator statistics", operator_statistics}},
      {7, {"navigation learning", navigation_learning}},
      {8, {"sensor sweep", sensor_sweep}},
      {9, {"spin penalty", spin_penalty}},
      {10, {"cross-strategy pattern", cross_strategy}},
      {11, {"incremental evolution", incremental}},
      {12, {"broadcast", broadcast}},
      {13, {"global determinism", determinism}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else {
      selected.push_back(std::atoi(arg.c_str()));
    }
  }
  if (selected.empty()) {
    for (const auto& [id, c] : criteria) selected.push_back(id);
  }

  int failures = 0;
  for (int id : selected) {
    const auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("criterion %d: FAIL unknown criterion\n", id);
      ++failures;
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = it->second.second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %-24s %s  %s  [%.1f s]\n", id, it->second.first.c_str(),
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !outcome.pass;
  }
  return failures == 0 ? 0 : 1;
}
