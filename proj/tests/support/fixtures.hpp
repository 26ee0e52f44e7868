#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "naive_eval.hpp"
#include "tpg/graph.hpp"
#include "tpg/instruction.hpp"
#include "tpg/program.hpp"
#include "tpg/rng.hpp"

namespace fixtures {

/// Custom set mixing element kinds and shapes, registered as "mixed".
std::shared_ptr<const tpg::InstructionSet> mixed_set();
/// The same instructions for the oracle, in the same order.
std::vector<oracle::Op> mixed_ops();

/// int8 4x4 grid, float64[5], int64[3].
std::vector<tpg::SourceShape> mixed_shapes();

std::shared_ptr<const tpg::ProgramContext> context(std::shared_ptr<const tpg::InstructionSet> set,
                                                   std::vector<tpg::SourceShape> shapes,
                                                   std::size_t registers = 8);

/// Random contents; float64 sources occasionally hold 0, -0, inf or NaN.
tpg::StateSnapshot random_snapshot(const std::vector<tpg::SourceShape>& shapes, tpg::Rng& rng);

/// Valid graph with `teams` teams; team 0 is never a destination so the graph
/// keeps a root. Team edges may form cycles.
tpg::TpgGraph random_graph(std::shared_ptr<const tpg::ProgramContext> context, std::size_t actions,
                           std::size_t teams, std::size_t max_edges, std::size_t max_program, tpg::Rng& rng);

/// Equal bit patterns, or both NaN.
bool same_bits(double a, double b);

}  // namespace fixtures
