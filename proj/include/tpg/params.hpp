#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tpg {

/// How per-episode scores of one policy are folded into its fitness.
enum class ScoreAggregation { Mean, Min, Median };

std::string_view to_string(ScoreAggregation aggregation);
std::optional<ScoreAggregation> parse_score_aggregation(std::string_view text);

/// Meta-parameters of the training loop.
struct EvolutionParams {
  std::size_t nb_roots = 100;
  double ratio_deleted_roots = 0.85;
  std::size_t nb_generations = 200;
  std::size_t max_init_outgoing_edges = 3;
  std::size_t max_outgoing_edges = 10;
  std::size_t max_program_size = 96;
  std::size_t nb_registers = 8;
  std::size_t nb_iterations_per_policy_evaluation = 1;
  std::size_t max_steps_per_evaluation = 0;  // 0: the environment's horizon

  double p_edge_delete = 0.7;
  double p_edge_add = 0.7;
  double p_program_mutate = 0.2;
  double p_edge_destination_change = 0.1;
  double p_edge_destination_is_action = 0.5;

  double p_line_delete = 0.5;
  double p_line_add = 0.5;
  double p_line_mutate = 1.0;
  double p_line_swap = 1.0;

  std::size_t archive_size = 50;
  double archiving_probability = 0.05;
  std::size_t max_originality_rounds = 16;
  ScoreAggregation aggregation = ScoreAggregation::Mean;

  /// Throws Config naming the first out-of-range field.
  void validate() const;

  /// Number of roots removed by decimation: floor(ratio * nb_roots).
  std::size_t roots_to_delete() const noexcept;

  bool operator==(const EvolutionParams&) const = default;
};

}  // namespace tpg
