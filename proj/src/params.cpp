#include <cmath>
#include <string>

#include "tpg/fault.hpp"
#include "tpg/params.hpp"

namespace tpg {

std::string_view to_string(ScoreAggregation aggregation) {
  switch (aggregation) {
    case ScoreAggregation::Mean: return "mean";
    case ScoreAggregation::Min: return "min";
    case ScoreAggregation::Median: return "median";
  }
  return "mean";
}

std::optional<ScoreAggregation> parse_score_aggregation(std::string_view text) {
  if (text == "mean") return ScoreAggregation::Mean;
  if (text == "min") return ScoreAggregation::Min;
  if (text == "median") return ScoreAggregation::Median;
  return std::nullopt;
}

namespace {

void require(bool ok, const char* field, const std::string& why) {
  if (!ok) throw Fault(FaultKind::Config, std::string(field) + " out of range: " + why);
}

void probability(double p, const char* field) {
  require(p >= 0.0 && p <= 1.0, field, "must be in [0, 1]");
}

}  // namespace

void EvolutionParams::validate() const {
  require(nb_roots >= 2, "nbRoots", "must be >= 2");
  require(ratio_deleted_roots > 0.0 && ratio_deleted_roots < 1.0, "ratioDeletedRoots", "must be in (0, 1)");
  require(roots_to_delete() >= 1, "ratioDeletedRoots", "deletes no root at this nbRoots");
  require(max_init_outgoing_edges >= 2, "maxInitOutgoingEdges", "must be >= 2");
  require(max_outgoing_edges >= max_init_outgoing_edges, "maxOutgoingEdges", "must be >= maxInitOutgoingEdges");
  require(max_program_size >= 1, "maxProgramSize", "must be >= 1");
  require(nb_registers >= 1, "nbRegisters", "must be >= 1");
  require(nb_iterations_per_policy_evaluation >= 1, "nbIterationsPerPolicyEvaluation", "must be >= 1");
  require(max_originality_rounds >= 1, "maxOriginalityRounds", "must be >= 1");
  probability(p_edge_delete, "pEdgeDelete");
  probability(p_edge_add, "pEdgeAdd");
  probability(p_program_mutate, "pProgramMutate");
  probability(p_edge_destination_change, "pEdgeDestinationChange");
  probability(p_edge_destination_is_action, "pEdgeDestinationIsAction");
  probability(p_line_delete, "pLineDelete");
  probability(p_line_add, "pLineAdd");
  probability(p_line_mutate, "pLineMutate");
  probability(p_line_swap, "pLineSwap");
  probability(archiving_probability, "archivingProbability");
}

std::size_t EvolutionParams::roots_to_delete() const noexcept {
  // The epsilon absorbs representation error, e.g. 0.85 * 100 landing just below 85.
  return static_cast<std::size_t>(std::floor(ratio_deleted_roots * static_cast<double>(nb_roots) + 1e-9));
}

}  // namespace tpg
