#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpg {

/// Categories of errors raised by the library. Every public operation that
/// can fail throws a Fault carrying one of these.
enum class FaultKind {
  OperandUnavailable,
  RegisterOutOfRange,
  ReadOnlySource,
  SignatureMismatch,
  EmptySignature,
  InvalidProgram,
  NotARoot,
  InvalidGraph,
  InvalidArgument,
  MissingFitness,
  EnvironmentFault,
  WorkerFault,
  Config,
  Parse,
  Io,
};

std::string_view to_string(FaultKind kind);

class Fault : public std::runtime_error {
 public:
  Fault(FaultKind kind, const std::string& message);

  FaultKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  FaultKind kind_;
  std::string detail_;
};

}  // namespace tpg
