#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoca/experiments.hpp"

namespace evoca {

/// Every problem found in a configuration, each prefixed with its field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct LoadedConfig {
  ExperimentSpec spec;
  /// FNV-1a of the raw configuration bytes.
  std::uint64_t hash = 0;
};

/// Parses a JSON experiment configuration. Relative track paths resolve
/// against `base_dir`. Throws ConfigError listing all problems.
LoadedConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
LoadedConfig load_config(const std::filesystem::path& path);

}  // namespace evoca
