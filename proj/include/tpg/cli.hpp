#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "tpg/config.hpp"

namespace tpg {

/// `train` flags that override config values when present.
struct TrainOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> generations;
  std::optional<std::string> env;
  std::optional<std::string> iset;
  std::optional<std::string> out;
  std::optional<std::string> log;
  std::optional<std::string> log_timings;  // "on" or "off"
};

/// Defaults, then the JSON file at `config_path` (if non-empty), then the
/// flags. The thread count falls back to TPG_THREADS when neither the file
/// nor the flags name one. Throws Config/Io on bad input.
RunConfig resolve_train_config(const std::string& config_path, const TrainOverrides& flags);

/// The `tpg` command line: train, eval and inspect subcommands. Returns 0 on
/// success, 2 on usage errors (bad flags, unreadable files, bad configs) and
/// 1 on any other failure.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace tpg
