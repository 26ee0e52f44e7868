#include "tpg/serial_reference.hpp"

#include <algorithm>

#include "tpg/mutation.hpp"
#include "tpg/parallel.hpp"

namespace tpg::serial {

std::map<TeamId, double> evaluate_all_policies(const TpgGraph& graph, const LearningEnvironment& prototype,
                                               const EvolutionParams& params, Rng& master, Archive& archive) {
  const std::vector<TeamId> roots = graph.roots();
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < roots.size(); ++i) seeds.push_back(derive_seed(master));

  auto env = prototype.clone();
  ProgramExecutor executor(graph.context());
  const auto settings = EvaluationSettings::from(params);
  std::vector<Trace> traces;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Rng worker(seeds[i]);
    traces.push_back(evaluate_policy(graph, roots[i], *env, executor, worker, settings));
  }

  std::map<TeamId, double> fitness;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (auto& snapshot : traces[i].snapshots) {
      archive_maybe_record(archive, std::move(snapshot), params.archiving_probability, master);
    }
    fitness.emplace(roots[i], aggregate_scores(traces[i].scores, params.aggregation));
  }
  return fitness;
}

std::size_t mutate_programs(TpgGraph& graph, std::span<const EdgeId> edges, const EvolutionParams& params,
                            const Archive& archive, Rng& master) {
  std::vector<EdgeId> ordered(edges.begin(), edges.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < ordered.size(); ++i) seeds.push_back(derive_seed(master));

  std::size_t rounds = 0;
  ProgramExecutor executor(graph.context());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    Rng worker(seeds[i]);
    rounds += mutate_program(graph.program(ordered[i]), params, graph.context(), archive, worker, executor);
  }
  return rounds;
}

std::vector<std::vector<double>> compute_bid_vectors(const TpgGraph& graph, std::span<const EdgeId> edges,
                                                     std::span<const StateSnapshot> snapshots) {
  ProgramExecutor executor(graph.context());
  std::vector<std::vector<double>> out;
  out.reserve(edges.size());
  for (EdgeId e : edges) out.push_back(bids_on(executor, graph.edge(e).program, snapshots));
  return out;
}

}  // namespace tpg::serial
