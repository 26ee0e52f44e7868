#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tpg/archive.hpp"
#include "tpg/environment.hpp"
#include "tpg/graph.hpp"
#include "tpg/instruction.hpp"
#include "tpg/params.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// `params.nb_roots` root teams whose edges all lead to actions.
///
/// Draw order, root by root: the edge count k = 2 + uniform_index(maxInit - 1),
/// then for each edge its action followed by its program. The first two
/// actions of a root are distinct (the second is drawn among the others).
TpgGraph init_population(const EvolutionParams& params, std::size_t action_count,
                         std::shared_ptr<const ProgramContext> context, Rng& rng);

struct Decimation {
  std::vector<TeamId> removed;    // removal order
  std::vector<TeamId> survivors;  // evaluated roots left, ascending id
};

/// Removes the `params.roots_to_delete()` roots with the lowest fitness. NaN
/// counts as the lowest fitness; among equal fitnesses the higher team id goes
/// first. Every current root needs a fitness entry (MissingFitness otherwise).
/// Teams that lose their last parent become roots but are not survivors.
Decimation decimate(TpgGraph& graph, const std::map<TeamId, double>& fitness, const EvolutionParams& params);

/// Structural mutation of the freshly cloned root `team`, in this order: edge
/// deletions, edge additions, destination changes, program-mutation marks.
/// `destinations` are the teams an edge may be redirected to; `program_pool`
/// are the edges whose programs new edges copy. Program mutation itself is
/// deferred: the returned edges (at least one) still need mutate_program.
std::vector<EdgeId> mutate_team(TpgGraph& graph, TeamId team, std::span<const TeamId> destinations,
                                std::span<const EdgeId> program_pool, const EvolutionParams& params, Rng& rng);

struct Population {
  std::vector<TeamId> new_roots;
  std::vector<EdgeId> pending;  // edges whose program must be mutated
};

/// Clones uniformly drawn `parents` and mutates each clone until the graph has
/// `params.nb_roots` roots. Destinations and copied programs are drawn from
/// the teams and edges present before the first clone.
Population populate(TpgGraph& graph, std::span<const TeamId> parents, const EvolutionParams& params, Rng& rng);

/// Highest fitness, lowest team id on ties; NaN never wins over a number.
TeamId select_champion(const std::map<TeamId, double>& fitness);

struct GenerationReport {
  std::size_t generation = 0;
  std::map<TeamId, double> fitness;  // evaluated roots
  TeamId champion{};
  double champion_fitness = 0.0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  std::size_t evaluated_roots = 0;
  std::size_t removed_roots = 0;
  std::size_t surviving_roots = 0;
  std::size_t new_roots = 0;
  std::size_t roots_after = 0;
  std::size_t teams = 0;  // after repopulation
  std::size_t edges = 0;
  double mean_program_length = 0.0;
  std::size_t mutated_programs = 0;
  std::size_t mutation_rounds = 0;
  std::size_t archive_size = 0;
  std::uint64_t master_draws = 0;  // master generator draws in this generation
  double eval_ms = 0.0;
  double mutation_ms = 0.0;
};

enum class Backend { Parallel, Serial };

/// Owns one training run: the graph, the archive and the master generator.
class Trainer {
 public:
  Trainer(EvolutionParams params, std::unique_ptr<LearningEnvironment> environment,
          std::shared_ptr<const InstructionSet> instructions, std::uint64_t seed, std::size_t nb_threads = 0,
          Backend backend = Backend::Parallel);

  /// Evaluate, record the champion, decimate, repopulate, mutate programs.
  GenerationReport run_generation();

  /// Runs `count` generations, calling `on_report` after each.
  void run(std::size_t count, const std::function<void(const GenerationReport&)>& on_report = {});

  const TpgGraph& graph() const noexcept { return graph_; }
  const Archive& archive() const noexcept { return archive_; }
  const Rng& master() const noexcept { return master_; }
  const EvolutionParams& params() const noexcept { return params_; }
  const LearningEnvironment& environment() const noexcept { return *environment_; }
  std::size_t generation() const noexcept { return generation_; }
  std::size_t thread_count() const noexcept { return nb_threads_; }

  /// Champion of the latest generation, extracted before decimation.
  const std::optional<TpgGraph>& champion() const noexcept { return champion_; }
  double champion_fitness() const noexcept { return champion_fitness_; }

 private:
  EvolutionParams params_;
  std::unique_ptr<LearningEnvironment> environment_;
  std::size_t nb_threads_;
  Backend backend_;
  Rng master_;
  TpgGraph graph_;
  Archive archive_;
  std::size_t generation_ = 0;
  std::optional<TpgGraph> champion_;
  double champion_fitness_ = 0.0;
};

}  // namespace tpg
