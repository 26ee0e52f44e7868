#include "tpg/csv_log.hpp"

#include <array>
#include <charconv>

namespace tpg {

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

CsvLog::CsvLog(std::ostream& out, bool timings) : out_(out), timings_(timings) { out_ << header(timings_); }

void CsvLog::write(const GenerationReport& report) {
  out_ << row(report, timings_);
  out_.flush();
}

std::string CsvLog::header(bool timings) {
  std::string out = "generation,best,mean,worst,teams,edges,meanProgramLength";
  if (timings) out += ",evalMs,mutationMs";
  return out + "\n";
}

std::string CsvLog::row(const GenerationReport& r, bool timings) {
  std::string out = std::to_string(r.generation) + ',' + format_double(r.best) + ',' + format_double(r.mean) + ',' +
                    format_double(r.worst) + ',' + std::to_string(r.teams) + ',' + std::to_string(r.edges) + ',' +
                    format_double(r.mean_program_length);
  if (timings) out += ',' + format_double(r.eval_ms) + ',' + format_double(r.mutation_ms);
  return out + "\n";
}

}  // namespace tpg
