#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evoca/experiments.hpp"

namespace evoca {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// First line of every output file: tool version, config hash and master seed.
std::string output_header(std::uint64_t config_hash, std::uint64_t seed);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file. Throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest text that reads back to the same double.
std::string format_number(double value);

std::string format_curve(const EvolutionHistory& history);
std::string format_matrix(const CrossStrategyMatrix& matrix,
                          const std::vector<std::string>& strategy_names);
std::string format_incremental(const std::vector<IncrementalRecord>& records,
                               const std::vector<std::string>& strategy_names);
std::string format_rates(const CollisionRateReport& report);
std::string format_trace(const std::vector<TraceRecord>& trace);

/// `topology <sizes...>` line followed by one gene per line.
std::string format_weights(const Topology& topology, const Chromosome& chromosome);
/// Inverse of `format_weights`; `#` lines are skipped. Throws
/// std::invalid_argument on malformed text or a length mismatch.
std::pair<Topology, Chromosome> parse_weights(const std::string& text);

}  // namespace evoca
