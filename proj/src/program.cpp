#include "tpg/program.hpp"

#include <algorithm>
#include <array>

namespace tpg {

ProgramContext::ProgramContext(std::shared_ptr<const InstructionSet> instructions, std::size_t register_count,
                               std::vector<SourceShape> state_sources)
    : instructions_(std::move(instructions)), register_count_(register_count) {
  if (!instructions_) throw Fault(FaultKind::InvalidArgument, "program context without instruction set");
  if (register_count_ == 0) throw Fault(FaultKind::InvalidArgument, "program context without registers");

  sources_.reserve(state_sources.size() + 1);
  sources_.push_back(RegisterFile::shape_for(register_count_));
  for (auto& shape : state_sources) {
    shape.access = Access::ReadOnly;
    sources_.push_back(shape);
  }

  providers_.resize(instructions_->size());
  for (std::size_t i = 0; i < instructions_->size(); ++i) {
    const auto signature = (*instructions_)[i].signature();
    bool usable = true;
    providers_[i].resize(signature.size());
    for (std::size_t op = 0; op < signature.size(); ++op) {
      for (std::size_t s = 0; s < sources_.size(); ++s) {
        if (sources_[s].addressable_count(signature[op]) > 0) {
          providers_[i][op].push_back(static_cast<std::uint32_t>(s));
        }
      }
      usable = usable && !providers_[i][op].empty();
    }
    if (usable) usable_.push_back(static_cast<std::uint32_t>(i));
  }
  if (usable_.empty()) {
    throw Fault(FaultKind::InvalidArgument,
                "no instruction of set '" + instructions_->name() + "' can be fed by these data sources");
  }
}

bool ProgramContext::operator==(const ProgramContext& other) const {
  return instructions_->name() == other.instructions_->name() &&
         instructions_->size() == other.instructions_->size() && register_count_ == other.register_count_ &&
         sources_ == other.sources_;
}

ProgramExecutor::ProgramExecutor(const ProgramContext& context)
    : context_(&context),
      registers_(context.register_count()),
      operands_(context.instructions().max_arity()) {
  sources_.push_back(registers_.source());
  f64_.push_back(registers_.data());
  counts_.push_back(registers_.size());
  scratch_.reserve(context.instructions().scratch_need());
}

void ProgramExecutor::bind(std::span<const DataSource> state) {
  const auto expected = context_->state_sources();
  if (state.size() != expected.size()) {
    throw Fault(FaultKind::InvalidArgument, "expected " + std::to_string(expected.size()) +
                                                " state sources, got " + std::to_string(state.size()));
  }
  sources_.erase(sources_.begin() + 1, sources_.end());
  f64_.resize(1);
  counts_.resize(1);
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto& got = state[i].shape();
    const auto& want = expected[i];
    if (got.kind != want.kind || got.rows != want.rows || got.cols != want.cols ||
        got.two_dimensional != want.two_dimensional) {
      throw Fault(FaultKind::InvalidArgument, "state source " + std::to_string(i + 1) + " has the wrong shape");
    }
    sources_.push_back(state[i]);
    f64_.push_back(state[i].f64_data());
    counts_.push_back(got.native_count());
  }
}

void ProgramExecutor::bind(const StateSnapshot& snapshot) {
  const auto views = views_of(snapshot);
  bind(views);
}

void ProgramExecutor::mark_live(const Program& program) {
  const InstructionSet& set = context_->instructions();
  const std::size_t register_count = registers_.size();
  const std::size_t n = program.lines.size();
  // Backward pass: a line is live when it writes a register read later by a
  // live line, or register 0 with no later overwrite.
  live_.assign(n, 1);
  if (register_count <= 64) {
    std::uint64_t needed = 1;
    for (std::size_t i = n; i-- > 0;) {
      const Line& line = program.lines[i];
      if (line.destination >= register_count || line.instruction >= set.size()) continue;
      const std::uint64_t bit = std::uint64_t{1} << line.destination;
      if ((needed & bit) == 0) {
        live_[i] = 0;
        continue;
      }
      needed &= ~bit;
      const auto signature = set[line.instruction].signature();
      const std::size_t count = std::min(signature.size(), line.operands.size());
      for (std::size_t k = 0; k < count; ++k) {
        const Address a = line.operands[k];
        if (a.source != 0) continue;
        const std::size_t end = std::min<std::size_t>(a.location + signature[k].element_count(), 64);
        for (std::size_t r = a.location; r < end; ++r) needed |= std::uint64_t{1} << r;
      }
    }
  }
}

CompiledProgram ProgramExecutor::compile(const Program& program) {
  const InstructionSet& set = context_->instructions();
  CompiledProgram out;
  mark_live(program);
  for (std::size_t i = 0; i < program.lines.size(); ++i) {
    if (!live_[i]) continue;
    const Line& line = program.lines[i];
    if (line.instruction >= set.size() || line.destination >= registers_.size()) return {};
    const Instruction& instruction = set[line.instruction];
    const ScalarKernel kernel = instruction.scalar_kernel();
    if (kernel == nullptr || line.operands.size() != instruction.arity()) return {};
    CompiledProgram::Step step;
    step.kernel = kernel;
    step.destination = registers_.data() + line.destination;
    step.arity = static_cast<std::uint32_t>(instruction.arity());
    for (std::size_t k = 0; k < instruction.arity(); ++k) {
      const Address a = line.operands[k];
      if (a.source >= f64_.size() || f64_[a.source] == nullptr || a.location >= counts_[a.source]) return {};
      step.operands[k] = f64_[a.source] + a.location;
    }
    out.steps.push_back(step);
  }
  out.direct = true;
  return out;
}

double ProgramExecutor::run(const CompiledProgram& compiled, const Program& program) {
  if (!compiled.direct) return execute(program);
  registers_.reset();
  std::array<double, Instruction::kMaxKernelArity> args{};
  for (const auto& step : compiled.steps) {
    for (std::uint32_t k = 0; k < step.arity; ++k) args[k] = *step.operands[k];
    *step.destination = step.kernel(args.data());
  }
  return registers_.result();
}

double ProgramExecutor::execute(const Program& program) {
  const InstructionSet& set = context_->instructions();
  const std::size_t register_count = registers_.size();
  const std::size_t n = program.lines.size();
  registers_.reset();
  double* registers = registers_.data();

  mark_live(program);

  std::array<double, Instruction::kMaxKernelArity> args{};
  for (std::size_t i = 0; i < n; ++i) {
    if (!live_[i]) continue;
    const Line& line = program.lines[i];
    if (line.instruction >= set.size()) {
      throw Fault(FaultKind::InvalidProgram, "instruction index " + std::to_string(line.instruction));
    }
    const Instruction& instruction = set[line.instruction];
    const auto signature = instruction.signature();
    if (line.operands.size() != signature.size()) {
      throw Fault(FaultKind::InvalidProgram, "operand count does not match " + instruction.name());
    }
    if (line.destination >= register_count) {
      throw Fault(FaultKind::RegisterOutOfRange, "register " + std::to_string(line.destination) + " of " +
                                                     std::to_string(register_count));
    }

    if (const ScalarKernel kernel = instruction.scalar_kernel()) {
      bool direct = true;
      for (std::size_t k = 0; k < signature.size(); ++k) {
        const Address a = line.operands[k];
        if (a.source >= f64_.size() || f64_[a.source] == nullptr || a.location >= counts_[a.source]) {
          direct = false;
          break;
        }
        args[k] = f64_[a.source][a.location];
      }
      if (direct) {
        registers[line.destination] = kernel(args.data());
        continue;
      }
    }

    scratch_.clear();
    for (std::size_t k = 0; k < signature.size(); ++k) {
      const Address address = line.operands[k];
      if (address.source >= sources_.size()) {
        throw Fault(FaultKind::OperandUnavailable, "data source " + std::to_string(address.source));
      }
      operands_[k] = sources_[address.source].get_data(signature[k], address.location, scratch_);
    }
    registers[line.destination] =
        instruction.evaluate(std::span<const Operand>(operands_.data(), signature.size()));
  }
  return registers_.result();
}

double execute_program(const ProgramContext& context, const Program& program, std::span<const DataSource> state) {
  ProgramExecutor executor(context);
  executor.bind(state);
  return executor.execute(program);
}

std::vector<DataSource> views_of(const StateSnapshot& snapshot) {
  std::vector<DataSource> views;
  views.reserve(snapshot.size());
  for (const auto& buffer : snapshot) views.push_back(buffer.view());
  return views;
}

std::vector<double> bids_on(ProgramExecutor& executor, const Program& program,
                            std::span<const StateSnapshot> snapshots) {
  std::vector<double> bids;
  bids.reserve(snapshots.size());
  for (const auto& snapshot : snapshots) {
    executor.bind(snapshot);
    bids.push_back(executor.execute(program));
  }
  return bids;
}

std::vector<double> bids_on(const ProgramContext& context, const Program& program,
                            std::span<const StateSnapshot> snapshots) {
  ProgramExecutor executor(context);
  return bids_on(executor, program, snapshots);
}

std::vector<std::string> validate_program(const Program& program, const ProgramContext& context,
                                          std::size_t max_program_size) {
  std::vector<std::string> violations;
  if (program.lines.empty()) violations.emplace_back("empty program");
  if (program.lines.size() > max_program_size) {
    violations.push_back("program has " + std::to_string(program.lines.size()) + " lines, limit is " +
                         std::to_string(max_program_size));
  }
  const InstructionSet& set = context.instructions();
  const auto sources = context.sources();
  for (std::size_t l = 0; l < program.lines.size(); ++l) {
    const Line& line = program.lines[l];
    const std::string where = "line " + std::to_string(l) + ": ";
    if (line.instruction >= set.size()) {
      violations.push_back(where + "instruction index " + std::to_string(line.instruction) + " out of range");
      continue;
    }
    if (line.destination >= context.register_count()) {
      violations.push_back(where + "destination register " + std::to_string(line.destination) + " out of range");
    }
    const auto signature = set[line.instruction].signature();
    if (line.operands.size() != signature.size()) {
      violations.push_back(where + "operand count " + std::to_string(line.operands.size()) + " != arity " +
                           std::to_string(signature.size()));
      continue;
    }
    for (std::size_t i = 0; i < signature.size(); ++i) {
      const Address a = line.operands[i];
      if (a.source >= sources.size()) {
        violations.push_back(where + "operand " + std::to_string(i) + " names unknown source " +
                             std::to_string(a.source));
      } else if (!sources[a.source].can_provide(signature[i], a.location)) {
        violations.push_back(where + "operand " + std::to_string(i) + " address out of range");
      }
    }
  }
  return violations;
}

}  // namespace tpg
