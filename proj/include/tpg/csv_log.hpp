#pragma once

#include <ostream>
#include <string>

#include "tpg/evolution.hpp"

namespace tpg {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Training statistics, one row per generation after a header row. Timing
/// columns are omitted when `timings` is false so logs of equal runs compare
/// byte for byte.
class CsvLog {
 public:
  CsvLog(std::ostream& out, bool timings);

  void write(const GenerationReport& report);

  static std::string header(bool timings);
  static std::string row(const GenerationReport& report, bool timings);

 private:
  std::ostream& out_;
  bool timings_;
};

}  // namespace tpg
