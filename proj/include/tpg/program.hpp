#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tpg/data_source.hpp"
#include "tpg/instruction.hpp"

namespace tpg {

/// Operand address: a data source id and a location within it. Source 0 is
/// always the register file; state sources follow in environment order.
struct Address {
  std::uint32_t source = 0;
  std::uint32_t location = 0;

  bool operator==(const Address&) const = default;
};

struct Line {
  std::uint32_t instruction = 0;
  std::uint32_t destination = 0;
  std::vector<Address> operands;

  bool operator==(const Line&) const = default;
};

/// Straight-line register-machine program. Its bid is the final value of
/// register 0.
struct Program {
  std::vector<Line> lines;

  bool operator==(const Program&) const = default;
};

/// Everything programs of one graph share: the instruction set, the register
/// count and the shapes of the environment state sources.
class ProgramContext {
 public:
  ProgramContext(std::shared_ptr<const InstructionSet> instructions, std::size_t register_count,
                 std::vector<SourceShape> state_sources);

  const InstructionSet& instructions() const noexcept { return *instructions_; }
  const std::shared_ptr<const InstructionSet>& instruction_set() const noexcept { return instructions_; }
  std::size_t register_count() const noexcept { return register_count_; }

  /// All sources, register file first.
  std::span<const SourceShape> sources() const noexcept { return sources_; }
  std::span<const SourceShape> state_sources() const noexcept {
    return std::span<const SourceShape>(sources_).subspan(1);
  }

  /// Indices of instructions whose every operand can be served by some source.
  std::span<const std::uint32_t> usable_instructions() const noexcept { return usable_; }

  /// Sources that serve operand `operand` of instruction `instruction`.
  std::span<const std::uint32_t> providers(std::size_t instruction, std::size_t operand) const {
    return providers_[instruction][operand];
  }

  bool operator==(const ProgramContext& other) const;

 private:
  std::shared_ptr<const InstructionSet> instructions_;
  std::size_t register_count_;
  std::vector<SourceShape> sources_;
  std::vector<std::uint32_t> usable_;
  std::vector<std::vector<std::vector<std::uint32_t>>> providers_;
};

/// Straight-line form of a program for one executor binding: the lines that
/// can reach register 0, each reduced to a direct kernel call on fixed
/// addresses. Programs with any other live line are not `direct` and run
/// through ProgramExecutor::execute instead. Invalid once the executor is
/// rebound or destroyed.
struct CompiledProgram {
  struct Step {
    ScalarKernel kernel = nullptr;
    double* destination = nullptr;
    std::array<const double*, Instruction::kMaxKernelArity> operands{};
    std::uint32_t arity = 0;
  };

  std::vector<Step> steps;
  bool direct = false;
};

/// Executes programs against one bound set of state sources, with a private
/// register file. Not thread safe; use one executor per worker.
class ProgramExecutor {
 public:
  explicit ProgramExecutor(const ProgramContext& context);

  ProgramExecutor(const ProgramExecutor&) = delete;
  ProgramExecutor& operator=(const ProgramExecutor&) = delete;

  /// Binds the state sources read by subsequent executions. Their shapes must
  /// match the context. The views must outlive the executions.
  void bind(std::span<const DataSource> state);
  void bind(const StateSnapshot& snapshot);
  void bind(StateSnapshot&&) = delete;  // the views would dangle

  /// Zeroes the registers, runs the lines in order and returns register 0.
  /// Lines whose result can never reach register 0 are skipped; their
  /// operands are not checked. Throws OperandUnavailable, InvalidProgram or
  /// RegisterOutOfRange on malformed lines.
  double execute(const Program& program);

  /// Precomputes `program` for the current binding.
  CompiledProgram compile(const Program& program);

  /// Same result as execute(program), through `compiled` when it is direct.
  double run(const CompiledProgram& compiled, const Program& program);

  const RegisterFile& registers() const noexcept { return registers_; }
  const ProgramContext& context() const noexcept { return *context_; }

 private:
  const ProgramContext* context_;
  RegisterFile registers_;
  std::vector<DataSource> sources_;
  std::vector<Operand> operands_;
  OperandScratch scratch_;
  std::vector<const double*> f64_;  // per source, nullptr unless float64
  std::vector<std::size_t> counts_;  // per source native element count
  std::vector<std::uint8_t> live_;

  /// Fills live_ for `program`; every line stays live when liveness cannot
  /// be tracked.
  void mark_live(const Program& program);
};

/// One-shot execution with a fresh register file.
double execute_program(const ProgramContext& context, const Program& program,
                       std::span<const DataSource> state);

/// Read-only views over every buffer of a snapshot.
std::vector<DataSource> views_of(const StateSnapshot& snapshot);

/// Bid of `program` on each snapshot, in order.
std::vector<double> bids_on(const ProgramContext& context, const Program& program,
                            std::span<const StateSnapshot> snapshots);
std::vector<double> bids_on(ProgramExecutor& executor, const Program& program,
                            std::span<const StateSnapshot> snapshots);

/// Every violated line invariant, as human-readable messages. Empty when the
/// program is valid.
std::vector<std::string> validate_program(const Program& program, const ProgramContext& context,
                                          std::size_t max_program_size = std::numeric_limits<std::size_t>::max());

}  // namespace tpg
