#include "tpg/fault.hpp"

namespace tpg {

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::OperandUnavailable: return "operand unavailable";
    case FaultKind::RegisterOutOfRange: return "register out of range";
    case FaultKind::ReadOnlySource: return "read-only source";
    case FaultKind::SignatureMismatch: return "arity/type mismatch";
    case FaultKind::EmptySignature: return "empty signature";
    case FaultKind::InvalidProgram: return "invalid program";
    case FaultKind::NotARoot: return "not a root";
    case FaultKind::InvalidGraph: return "invalid graph";
    case FaultKind::InvalidArgument: return "invalid argument";
    case FaultKind::MissingFitness: return "missing fitness";
    case FaultKind::EnvironmentFault: return "environment fault";
    case FaultKind::WorkerFault: return "worker fault";
    case FaultKind::Config: return "config";
    case FaultKind::Parse: return "parse";
    case FaultKind::Io: return "io";
  }
  return "unknown";
}

Fault::Fault(FaultKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace tpg
