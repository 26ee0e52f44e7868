#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tpg/archive.hpp"
#include "tpg/environment.hpp"
#include "tpg/graph.hpp"
#include "tpg/params.hpp"
#include "tpg/rng.hpp"

/// Single-threaded counterparts of the parallel kernels. They consume the
/// master generator in the same order and must produce identical results;
/// tests and the benchmark compare against them.
namespace tpg::serial {

std::map<TeamId, double> evaluate_all_policies(const TpgGraph& graph, const LearningEnvironment& prototype,
                                               const EvolutionParams& params, Rng& master, Archive& archive);

std::size_t mutate_programs(TpgGraph& graph, std::span<const EdgeId> edges, const EvolutionParams& params,
                            const Archive& archive, Rng& master);

std::vector<std::vector<double>> compute_bid_vectors(const TpgGraph& graph, std::span<const EdgeId> edges,
                                                     std::span<const StateSnapshot> snapshots);

}  // namespace tpg::serial
