#include "tpg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace tpg {

TpgGraph::TpgGraph(std::shared_ptr<const ProgramContext> context, std::size_t action_count)
    : context_(std::move(context)), action_count_(action_count) {
  if (!context_) throw Fault(FaultKind::InvalidArgument, "graph without program context");
  if (action_count_ == 0) throw Fault(FaultKind::InvalidArgument, "graph without actions");
}

const Team& TpgGraph::team(TeamId id) const {
  auto it = teams_.find(id);
  if (it == teams_.end()) throw Fault(FaultKind::InvalidGraph, "no team T" + std::to_string(to_index(id)));
  return it->second;
}

Team& TpgGraph::team_mut(TeamId id) {
  auto it = teams_.find(id);
  if (it == teams_.end()) throw Fault(FaultKind::InvalidGraph, "no team T" + std::to_string(to_index(id)));
  return it->second;
}

const Edge& TpgGraph::edge(EdgeId id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Fault(FaultKind::InvalidGraph, "no edge " + std::to_string(to_index(id)));
  return it->second;
}

Program& TpgGraph::program(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Fault(FaultKind::InvalidGraph, "no edge " + std::to_string(to_index(id)));
  return it->second.program;
}

TeamId TpgGraph::add_team() {
  const TeamId id = next_team_;
  next_team_ = TeamId{to_index(id) + 1};
  teams_.emplace(id, Team{id, {}, 0});
  return id;
}

void TpgGraph::check_destination(TeamId source, Vertex destination) const {
  if (destination.is_action()) {
    if (destination.id >= action_count_) {
      throw Fault(FaultKind::InvalidGraph, "action " + std::to_string(destination.id) + " out of range");
    }
    return;
  }
  if (destination.team_id() == source) {
    throw Fault(FaultKind::InvalidGraph, "self-loop forbidden on T" + std::to_string(to_index(source)));
  }
  if (!has_team(destination.team_id())) {
    throw Fault(FaultKind::InvalidGraph, "no team T" + std::to_string(destination.id));
  }
}

TeamId TpgGraph::add_team(TeamId id) {
  if (to_index(id) < to_index(next_team_)) {
    throw Fault(FaultKind::InvalidGraph, "team id T" + std::to_string(to_index(id)) + " already used");
  }
  next_team_ = id;
  return add_team();
}

EdgeId TpgGraph::add_edge(TeamId source, Vertex destination, Program program) {
  Team& from = team_mut(source);
  check_destination(source, destination);
  const EdgeId id = next_edge_;
  next_edge_ = EdgeId{to_index(id) + 1};
  edges_.emplace(id, Edge{id, source, destination, std::move(program)});
  from.outgoing.push_back(id);
  if (destination.is_team()) ++team_mut(destination.team_id()).incoming;
  return id;
}

void TpgGraph::remove_edge(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Fault(FaultKind::InvalidGraph, "no edge " + std::to_string(to_index(id)));
  const Edge& e = it->second;
  auto& outgoing = team_mut(e.source).outgoing;
  outgoing.erase(std::find(outgoing.begin(), outgoing.end(), id));
  if (e.destination.is_team()) --team_mut(e.destination.team_id()).incoming;
  edges_.erase(it);
}

void TpgGraph::set_destination(EdgeId id, Vertex destination) {
  auto it = edges_.find(id);
  if (it == edges_.end()) throw Fault(FaultKind::InvalidGraph, "no edge " + std::to_string(to_index(id)));
  Edge& e = it->second;
  check_destination(e.source, destination);
  if (e.destination.is_team()) --team_mut(e.destination.team_id()).incoming;
  if (destination.is_team()) ++team_mut(destination.team_id()).incoming;
  e.destination = destination;
}

std::vector<TeamId> TpgGraph::roots() const {
  std::vector<TeamId> out;
  for (const auto& [id, t] : teams_) {
    if (t.incoming == 0) out.push_back(id);
  }
  return out;
}

TeamId TpgGraph::clone_team(TeamId id) {
  const std::vector<EdgeId> source_edges = team(id).outgoing;
  const TeamId copy = add_team();
  for (EdgeId e : source_edges) {
    const Edge& original = edge(e);
    add_edge(copy, original.destination, original.program);
  }
  return copy;
}

void TpgGraph::remove_root(TeamId id) {
  const Team& t = team(id);
  if (t.incoming != 0) {
    throw Fault(FaultKind::NotARoot, "T" + std::to_string(to_index(id)) + " has " +
                                         std::to_string(t.incoming) + " incoming edges");
  }
  const std::vector<EdgeId> outgoing = t.outgoing;
  for (EdgeId e : outgoing) remove_edge(e);
  teams_.erase(id);
}

bool TpgGraph::operator==(const TpgGraph& other) const {
  return *context_ == *other.context_ && action_count_ == other.action_count_ && teams_ == other.teams_ &&
         edges_ == other.edges_;
}

std::vector<std::string> check_invariants(const TpgGraph& graph, std::size_t max_program_size) {
  std::vector<std::string> problems;
  std::map<TeamId, std::size_t> incoming;

  for (const auto& [id, e] : graph.edges()) {
    const std::string name = "edge " + std::to_string(to_index(id));
    if (!graph.has_team(e.source)) {
      problems.push_back(name + ": unknown source team");
      continue;
    }
    const auto& out = graph.team(e.source).outgoing;
    if (std::find(out.begin(), out.end(), id) == out.end()) problems.push_back(name + ": not listed by its source");
    if (e.destination.is_action()) {
      if (e.destination.id >= graph.action_count()) problems.push_back(name + ": action out of range");
    } else if (e.destination.team_id() == e.source) {
      problems.push_back(name + ": self-loop");
    } else if (!graph.has_team(e.destination.team_id())) {
      problems.push_back(name + ": unknown destination team");
    } else {
      ++incoming[e.destination.team_id()];
    }
    if (max_program_size > 0) {
      for (const auto& v : validate_program(e.program, graph.context(), max_program_size)) {
        problems.push_back(name + ": " + v);
      }
    }
  }

  for (const auto& [id, t] : graph.teams()) {
    const std::string name = "T" + std::to_string(to_index(id));
    if (t.outgoing.size() < 2) problems.push_back(name + ": fewer than 2 outgoing edges");
    std::size_t to_actions = 0;
    for (EdgeId e : t.outgoing) {
      if (!graph.has_edge(e)) {
        problems.push_back(name + ": lists missing edge " + std::to_string(to_index(e)));
      } else if (graph.edge(e).destination.is_action()) {
        ++to_actions;
      }
    }
    if (to_actions == 0) problems.push_back(name + ": no edge to an action");
    auto it = incoming.find(id);
    const std::size_t counted = it == incoming.end() ? 0 : it->second;
    if (counted != t.incoming) problems.push_back(name + ": stale incoming count");
  }

  if (graph.team_count() > 0 && graph.roots().empty()) problems.emplace_back("graph has no root team");
  return problems;
}

TpgGraph extract_champion(const TpgGraph& graph, TeamId root) {
  std::map<TeamId, TeamId> renumbered;
  std::vector<TeamId> order;
  std::deque<TeamId> frontier{root};
  renumbered.emplace(root, TeamId{0});
  while (!frontier.empty()) {
    const TeamId current = frontier.front();
    frontier.pop_front();
    order.push_back(current);
    for (EdgeId e : graph.team(current).outgoing) {
      const Vertex dest = graph.edge(e).destination;
      if (dest.is_team() && !renumbered.contains(dest.team_id())) {
        renumbered.emplace(dest.team_id(), TeamId{static_cast<std::uint32_t>(renumbered.size())});
        frontier.push_back(dest.team_id());
      }
    }
  }

  TpgGraph out(graph.context_ptr(), graph.action_count());
  for (std::size_t i = 0; i < order.size(); ++i) out.add_team();
  for (TeamId original : order) {
    for (EdgeId e : graph.team(original).outgoing) {
      const Edge& edge = graph.edge(e);
      Vertex dest = edge.destination;
      if (dest.is_team()) dest = Vertex::team(renumbered.at(dest.team_id()));
      out.add_edge(renumbered.at(original), dest, edge.program);
    }
  }
  return out;
}

bool bid_precedes(double a, EdgeId edge_a, double b, EdgeId edge_b) noexcept {
  const bool finite_a = std::isfinite(a);
  const bool finite_b = std::isfinite(b);
  if (finite_a != finite_b) return finite_a;
  if (finite_a && a != b) return a > b;
  return edge_a < edge_b;
}

ActionId infer(const TpgGraph& graph, TeamId team, ProgramExecutor& executor, std::vector<EdgeId>& trace) {
  return infer(
      graph, team, [&executor](const Edge& edge) { return executor.execute(edge.program); }, trace);
}

ActionId infer(const TpgGraph& graph, TeamId team, const std::function<double(const Edge&)>& bid,
               std::vector<EdgeId>& trace) {
  trace.clear();
  const std::size_t limit = graph.edge_count();
  for (;;) {
    const Edge* best = nullptr;
    double best_bid = 0.0;
    for (EdgeId id : graph.team(team).outgoing) {
      if (std::find(trace.begin(), trace.end(), id) != trace.end()) continue;
      const Edge& candidate = graph.edge(id);
      const double value = bid(candidate);
      if (best == nullptr || bid_precedes(value, id, best_bid, best->id)) {
        best = &candidate;
        best_bid = value;
      }
    }
    if (best == nullptr) {
      throw Fault(FaultKind::InvalidGraph, "T" + std::to_string(to_index(team)) + " has no admissible edge");
    }
    trace.push_back(best->id);
    if (best->destination.is_action()) return best->destination.id;
    if (trace.size() > limit) throw Fault(FaultKind::InvalidGraph, "inference did not terminate");
    team = best->destination.team_id();
  }
}

InferenceResult infer(const TpgGraph& graph, TeamId team, ProgramExecutor& executor) {
  InferenceResult result;
  result.action = infer(graph, team, executor, result.trace);
  return result;
}

InferenceResult infer(const TpgGraph& graph, TeamId team, std::span<const DataSource> state) {
  ProgramExecutor executor(graph.context());
  executor.bind(state);
  return infer(graph, team, executor);
}

}  // namespace tpg
