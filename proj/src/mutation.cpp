#include "tpg/mutation.hpp"

#include <algorithm>
#include <utility>

namespace tpg {

Address random_address(const ProgramContext& context, std::size_t instruction, std::size_t operand, Rng& rng) {
  const auto providers = context.providers(instruction, operand);
  if (providers.empty()) {
    throw Fault(FaultKind::OperandUnavailable, "no source serves operand " + std::to_string(operand) + " of " +
                                                   context.instructions()[instruction].name());
  }
  const std::uint32_t source = providers[rng.uniform_index(providers.size())];
  const OperandType& type = context.instructions()[instruction].signature()[operand];
  const std::size_t count = context.sources()[source].addressable_count(type);
  return Address{source, static_cast<std::uint32_t>(rng.uniform_index(count))};
}

Line random_line(const ProgramContext& context, Rng& rng) {
  const auto usable = context.usable_instructions();
  Line line;
  line.instruction = usable[rng.uniform_index(usable.size())];
  line.destination = static_cast<std::uint32_t>(rng.uniform_index(context.register_count()));
  const std::size_t arity = context.instructions()[line.instruction].arity();
  line.operands.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) line.operands.push_back(random_address(context, line.instruction, i, rng));
  return line;
}

Program random_program(const ProgramContext& context, std::size_t max_size, Rng& rng) {
  const std::size_t length = 1 + rng.uniform_index(max_size);
  Program program;
  program.lines.reserve(length);
  for (std::size_t i = 0; i < length; ++i) program.lines.push_back(random_line(context, rng));
  return program;
}

void mutate_line(Line& line, const ProgramContext& context, Rng& rng) {
  switch (rng.uniform_index(3)) {
    case 0: {
      const auto usable = context.usable_instructions();
      const std::uint32_t next = usable[rng.uniform_index(usable.size())];
      if (next == line.instruction) return;
      line.instruction = next;
      const auto signature = context.instructions()[next].signature();
      const auto sources = context.sources();
      const std::size_t kept = std::min(line.operands.size(), signature.size());
      line.operands.resize(signature.size());
      for (std::size_t i = 0; i < signature.size(); ++i) {
        const Address a = line.operands[i];
        const bool still_valid =
            i < kept && a.source < sources.size() && sources[a.source].can_provide(signature[i], a.location);
        if (!still_valid) line.operands[i] = random_address(context, next, i, rng);
      }
      return;
    }
    case 1:
      line.destination = static_cast<std::uint32_t>(rng.uniform_index(context.register_count()));
      return;
    default: {
      const std::size_t operand = rng.uniform_index(line.operands.size());
      line.operands[operand] = random_address(context, line.instruction, operand, rng);
      return;
    }
  }
}

namespace {

void mutation_round(Program& program, const EvolutionParams& params, const ProgramContext& context, Rng& rng) {
  auto& lines = program.lines;
  if (lines.size() > 1 && rng.bernoulli(params.p_line_delete)) {
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(lines.size())));
  }
  if (lines.size() < params.max_program_size && rng.bernoulli(params.p_line_add)) {
    const auto at = rng.uniform_index(lines.size() + 1);
    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), random_line(context, rng));
  }
  if (lines.size() >= 2 && rng.bernoulli(params.p_line_swap)) {
    const auto i = rng.uniform_index(lines.size());
    auto j = rng.uniform_index(lines.size() - 1);
    if (j >= i) ++j;
    std::swap(lines[i], lines[j]);
  }
  if (rng.bernoulli(params.p_line_mutate)) {
    mutate_line(lines[rng.uniform_index(lines.size())], context, rng);
  }
}

}  // namespace

std::size_t mutate_program(Program& program, const EvolutionParams& params, const ProgramContext& context,
                           const Archive& archive, Rng& rng, ProgramExecutor& executor) {
  std::size_t rounds = 0;
  do {
    mutation_round(program, params, context, rng);
    ++rounds;
  } while (rounds < params.max_originality_rounds && !is_original(program, archive, executor));
  return rounds;
}

std::size_t mutate_program(Program& program, const EvolutionParams& params, const ProgramContext& context,
                           const Archive& archive, Rng& rng) {
  ProgramExecutor executor(context);
  return mutate_program(program, params, context, archive, rng, executor);
}

}  // namespace tpg
