#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tpg/program.hpp"

namespace tpg {

enum class TeamId : std::uint32_t {};
enum class EdgeId : std::uint64_t {};
using ActionId = std::uint32_t;

constexpr std::uint32_t to_index(TeamId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint64_t to_index(EdgeId id) noexcept { return static_cast<std::uint64_t>(id); }

/// Edge destination: a team or an action leaf.
struct Vertex {
  enum class Kind : std::uint8_t { Team, Action };

  Kind kind = Kind::Action;
  std::uint32_t id = 0;

  static Vertex team(TeamId t) noexcept { return {Kind::Team, to_index(t)}; }
  static Vertex action(ActionId a) noexcept { return {Kind::Action, a}; }

  bool is_action() const noexcept { return kind == Kind::Action; }
  bool is_team() const noexcept { return kind == Kind::Team; }
  TeamId team_id() const noexcept { return TeamId{id}; }

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  EdgeId id{};
  TeamId source{};
  Vertex destination;
  Program program;

  bool operator==(const Edge&) const = default;
};

struct Team {
  TeamId id{};
  std::vector<EdgeId> outgoing;  // creation order
  std::size_t incoming = 0;

  bool operator==(const Team&) const = default;
};

/// Teams, action leaves and program-labelled edges. Ids are assigned in
/// creation order and never reused, so iteration order is deterministic.
///
/// Structural edits reject self-loops and dangling endpoints immediately. The
/// per-team rules (at least two outgoing edges, at least one of them to an
/// action) only hold between operations; check_invariants() verifies them.
class TpgGraph {
 public:
  TpgGraph(std::shared_ptr<const ProgramContext> context, std::size_t action_count);

  const ProgramContext& context() const noexcept { return *context_; }
  const std::shared_ptr<const ProgramContext>& context_ptr() const noexcept { return context_; }
  std::size_t action_count() const noexcept { return action_count_; }

  const std::map<TeamId, Team>& teams() const noexcept { return teams_; }
  const std::map<EdgeId, Edge>& edges() const noexcept { return edges_; }
  std::size_t team_count() const noexcept { return teams_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_team(TeamId id) const { return teams_.contains(id); }
  bool has_edge(EdgeId id) const { return edges_.contains(id); }
  const Team& team(TeamId id) const;
  const Edge& edge(EdgeId id) const;
  Program& program(EdgeId id);

  TeamId add_team();
  /// Adds a team with a chosen id, which must exceed every id used so far.
  TeamId add_team(TeamId id);
  EdgeId add_edge(TeamId source, Vertex destination, Program program);
  void remove_edge(EdgeId id);
  void set_destination(EdgeId id, Vertex destination);

  /// Teams without incoming edges, ascending id.
  std::vector<TeamId> roots() const;

  /// New root team with deep copies of every outgoing edge of `id`, same
  /// destinations, new edge ids in source-edge order.
  TeamId clone_team(TeamId id);

  /// Removes a team without incoming edges and its outgoing edges. Teams that
  /// lose their last incoming edge become roots. Throws NotARoot otherwise.
  void remove_root(TeamId id);

  TeamId next_team_id() const noexcept { return next_team_; }
  EdgeId next_edge_id() const noexcept { return next_edge_; }

  bool operator==(const TpgGraph& other) const;

 private:
  void check_destination(TeamId source, Vertex destination) const;
  Team& team_mut(TeamId id);

  std::shared_ptr<const ProgramContext> context_;
  std::size_t action_count_;
  std::map<TeamId, Team> teams_;
  std::map<EdgeId, Edge> edges_;
  TeamId next_team_{0};
  EdgeId next_edge_{0};
};

/// Every violated graph invariant. Program validity is included when
/// `max_program_size` is non-zero.
std::vector<std::string> check_invariants(const TpgGraph& graph, std::size_t max_program_size = 0);

/// Subgraph reachable from `root`, renumbered breadth-first from the root
/// (teams in visit order, edges in team order then creation order).
TpgGraph extract_champion(const TpgGraph& graph, TeamId root);

/// Strict total order on (bid, edge) pairs: finite bids beat non-finite ones,
/// larger finite bids beat smaller ones, and remaining ties go to the older
/// edge. Returns true when (a, edge_a) wins over (b, edge_b).
bool bid_precedes(double a, EdgeId edge_a, double b, EdgeId edge_b) noexcept;

struct InferenceResult {
  ActionId action = 0;
  std::vector<EdgeId> trace;  // selected edges, in order
};

/// Follows winning bids from `team` until an action is reached. Edges already
/// taken during this traversal are not offered again. The executor must be
/// bound to the current state.
ActionId infer(const TpgGraph& graph, TeamId team, ProgramExecutor& executor, std::vector<EdgeId>& trace);
InferenceResult infer(const TpgGraph& graph, TeamId team, ProgramExecutor& executor);
/// Same traversal with each edge's bid supplied by `bid`.
ActionId infer(const TpgGraph& graph, TeamId team, const std::function<double(const Edge&)>& bid,
               std::vector<EdgeId>& trace);
InferenceResult infer(const TpgGraph& graph, TeamId team, std::span<const DataSource> state);

}  // namespace tpg
