#include "evoca/output.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace evoca {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string output_header(std::uint64_t config_hash, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# evoca %s config=%016" PRIx64 " seed=%" PRIu64 "\n",
                EVOCA_VERSION, config_hash, seed);
  return buf;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

std::string format_number(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

std::string format_curve(const EvolutionHistory& history) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  for (const auto& r : history.records) {
    out += std::to_string(r.generation) + "," + format_number(r.best_fitness) + "," +
           format_number(r.mean_fitness) + "\n";
  }
  return out;
}

std::string format_matrix(const CrossStrategyMatrix& matrix,
                          const std::vector<std::string>& strategy_names) {
  std::string out = "deployed\\trained";
  for (const auto& name : strategy_names) out += "," + name;
  out += "\n";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += strategy_names.at(i);
    for (double v : matrix.entries[i]) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

std::string format_incremental(const std::vector<IncrementalRecord>& records,
                               const std::vector<std::string>& strategy_names) {
  std::string out = "iteration,generations,converged";
  for (const auto& name : strategy_names) out += "," + name;
  out += ",mean\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.generations) + "," +
           (r.converged ? "1" : "0");
    for (std::size_t s = 0; s < strategy_names.size(); ++s) {
      out += ",";
      if (s < r.fitness.size()) out += format_number(r.fitness[s]);
    }
    out += "," + format_number(r.mean) + "\n";
  }
  return out;
}

std::string format_rates(const CollisionRateReport& report) {
  std::string out = "strategy,before,champion_after,population_after\n";
  for (const auto& row : report.rows) {
    out += row.strategy + "," + format_number(row.before) + "," +
           format_number(row.champion_after) + ",";
    if (row.population_after) out += format_number(*row.population_after);
    out += "\n";
  }
  return out;
}

std::string format_trace(const std::vector<TraceRecord>& trace) {
  std::string out = "step,id,x,y,theta\n";
  for (const auto& t : trace) {
    out += std::to_string(t.step) + "," + std::to_string(t.vehicle) + "," + format_number(t.x) +
           "," + format_number(t.y) + "," + format_number(t.heading) + "\n";
  }
  return out;
}

std::string format_weights(const Topology& topology, const Chromosome& chromosome) {
  std::string out = "topology";
  for (std::size_t n : topology.layers()) out += " " + std::to_string(n);
  out += "\n";
  for (double g : chromosome.genes) out += format_number(g) + "\n";
  return out;
}

std::pair<Topology, Chromosome> parse_weights(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Topology> topology;
  Chromosome chromosome;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (!topology) {
      std::string word;
      fields >> word;
      if (word != "topology") {
        throw std::invalid_argument("weights: expected 'topology' header on line " +
                                    std::to_string(line_no));
      }
      std::vector<std::size_t> sizes;
      std::size_t n;
      while (fields >> n) sizes.push_back(n);
      topology = Topology(sizes);
      continue;
    }
    double g;
    if (!(fields >> g)) {
      throw std::invalid_argument("weights: bad number on line " + std::to_string(line_no));
    }
    chromosome.genes.push_back(g);
  }
  if (!topology) throw std::invalid_argument("weights: missing topology header");
  if (chromosome.size() != chromosome_length(*topology)) {
    throw std::invalid_argument("weights: expected " +
                                std::to_string(chromosome_length(*topology)) + " genes, found " +
                                std::to_string(chromosome.size()));
  }
  return {*topology, chromosome};
}

}  // namespace evoca
