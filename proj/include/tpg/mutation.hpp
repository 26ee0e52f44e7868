#pragma once

#include <cstddef>

#include "tpg/archive.hpp"
#include "tpg/params.hpp"
#include "tpg/program.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// Uniformly drawn valid address for operand `operand` of `instruction`: a
/// providing source first, then a location within it.
Address random_address(const ProgramContext& context, std::size_t instruction, std::size_t operand, Rng& rng);

/// Random usable instruction, random destination, random valid operands.
Line random_line(const ProgramContext& context, Rng& rng);

/// Program of uniform length in [1, max_size].
Program random_program(const ProgramContext& context, std::size_t max_size, Rng& rng);

/// Re-draws one of {instruction, destination, one operand address} of `line`.
/// A new instruction keeps the old operand addresses that remain valid.
void mutate_line(Line& line, const ProgramContext& context, Rng& rng);

/// Applies mutation rounds (line delete, insert, swap, change, each with its
/// probability) until the program is original with respect to `archive`, or
/// `params.max_originality_rounds` rounds have been applied. At least one
/// round is always applied. Returns the number of rounds.
std::size_t mutate_program(Program& program, const EvolutionParams& params, const ProgramContext& context,
                           const Archive& archive, Rng& rng, ProgramExecutor& executor);
std::size_t mutate_program(Program& program, const EvolutionParams& params, const ProgramContext& context,
                           const Archive& archive, Rng& rng);

}  // namespace tpg
