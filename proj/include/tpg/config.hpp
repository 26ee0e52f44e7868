#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tpg/params.hpp"

namespace tpg {

inline constexpr int kFormatVersion = 1;

/// Everything a training run needs. JSON keys are the camelCase field names
/// listed in the README; missing keys keep these defaults.
struct RunConfig {
  EvolutionParams params;
  std::string env = "pendulum";
  std::string iset = "simple";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> nb_threads;  // unset: TPG_THREADS, then all cores
  std::string out;             // champion DOT path
  std::string log;             // CSV path
  bool log_timings = true;

  /// Range-checks the parameters and resolves the env and iset names.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON config. Unknown keys, wrongly typed values and
/// out-of-range values raise Config faults naming the key; malformed JSON
/// raises Parse.
RunConfig load_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// Canonical JSON (sorted keys, every field present) accepted by load_config.
std::string to_json(const RunConfig& config);

}  // namespace tpg
