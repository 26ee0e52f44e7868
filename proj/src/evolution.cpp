#include "tpg/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "tpg/mutation.hpp"
#include "tpg/parallel.hpp"
#include "tpg/serial_reference.hpp"

namespace tpg {

TpgGraph init_population(const EvolutionParams& params, std::size_t action_count,
                         std::shared_ptr<const ProgramContext> context, Rng& rng) {
  if (action_count < 2) {
    throw Fault(FaultKind::InvalidArgument, "at least 2 actions required, got " + std::to_string(action_count));
  }
  params.validate();
  TpgGraph graph(std::move(context), action_count);
  for (std::size_t r = 0; r < params.nb_roots; ++r) {
    const TeamId team = graph.add_team();
    const std::size_t k = 2 + rng.uniform_index(params.max_init_outgoing_edges - 1);
    ActionId first = 0;
    for (std::size_t e = 0; e < k; ++e) {
      ActionId action = 0;
      if (e == 1) {
        action = static_cast<ActionId>(rng.uniform_index(action_count - 1));
        if (action >= first) ++action;
      } else {
        action = static_cast<ActionId>(rng.uniform_index(action_count));
      }
      if (e == 0) first = action;
      graph.add_edge(team, Vertex::action(action),
                     random_program(graph.context(), params.max_program_size, rng));
    }
  }
  return graph;
}

namespace {

/// a sorts before b when a is the worse root.
bool worse_root(const std::pair<TeamId, double>& a, const std::pair<TeamId, double>& b) {
  const bool nan_a = std::isnan(a.second);
  const bool nan_b = std::isnan(b.second);
  if (nan_a != nan_b) return nan_a;
  if (!nan_a && a.second != b.second) return a.second < b.second;
  return a.first > b.first;
}

std::size_t action_edges(const TpgGraph& graph, TeamId team) {
  std::size_t n = 0;
  for (EdgeId e : graph.team(team).outgoing) n += graph.edge(e).destination.is_action() ? 1 : 0;
  return n;
}

ActionId random_action(const TpgGraph& graph, Rng& rng) {
  return static_cast<ActionId>(rng.uniform_index(graph.action_count()));
}

/// Uniform team of `pool` other than `self`, if any.
std::optional<TeamId> random_team(std::span<const TeamId> pool, TeamId self, Rng& rng) {
  const bool has_self = std::find(pool.begin(), pool.end(), self) != pool.end();
  const std::size_t n = pool.size() - (has_self ? 1 : 0);
  if (n == 0) return std::nullopt;
  std::size_t i = rng.uniform_index(n);
  for (TeamId t : pool) {
    if (t == self) continue;
    if (i-- == 0) return t;
  }
  return std::nullopt;
}

}  // namespace

Decimation decimate(TpgGraph& graph, const std::map<TeamId, double>& fitness, const EvolutionParams& params) {
  std::vector<std::pair<TeamId, double>> ranked;
  for (TeamId root : graph.roots()) {
    auto it = fitness.find(root);
    if (it == fitness.end()) {
      throw Fault(FaultKind::MissingFitness, "no fitness for root T" + std::to_string(to_index(root)));
    }
    ranked.emplace_back(root, it->second);
  }
  std::sort(ranked.begin(), ranked.end(), worse_root);

  Decimation out;
  const std::size_t m = std::min(params.roots_to_delete(), ranked.size());
  for (std::size_t i = 0; i < m; ++i) {
    graph.remove_root(ranked[i].first);
    out.removed.push_back(ranked[i].first);
  }
  for (std::size_t i = m; i < ranked.size(); ++i) out.survivors.push_back(ranked[i].first);
  std::sort(out.survivors.begin(), out.survivors.end());
  return out;
}

std::vector<EdgeId> mutate_team(TpgGraph& graph, TeamId team, std::span<const TeamId> destinations,
                                std::span<const EdgeId> program_pool, const EvolutionParams& params, Rng& rng) {
  std::vector<EdgeId> pending;

  while (graph.team(team).outgoing.size() > 2 && rng.bernoulli(params.p_edge_delete)) {
    const bool last_action = action_edges(graph, team) == 1;
    std::vector<EdgeId> deletable;
    for (EdgeId e : graph.team(team).outgoing) {
      if (!(last_action && graph.edge(e).destination.is_action())) deletable.push_back(e);
    }
    if (deletable.empty()) break;
    graph.remove_edge(deletable[rng.uniform_index(deletable.size())]);
  }

  while (graph.team(team).outgoing.size() < params.max_outgoing_edges && !program_pool.empty() &&
         rng.bernoulli(params.p_edge_add)) {
    Program program = graph.edge(program_pool[rng.uniform_index(program_pool.size())]).program;
    Vertex destination = Vertex::action(0);
    if (rng.bernoulli(params.p_edge_destination_is_action)) {
      destination = Vertex::action(random_action(graph, rng));
    } else if (auto t = random_team(destinations, team, rng)) {
      destination = Vertex::team(*t);
    } else {
      destination = Vertex::action(random_action(graph, rng));
    }
    pending.push_back(graph.add_edge(team, destination, std::move(program)));
  }

  const std::vector<EdgeId> edges = graph.team(team).outgoing;
  for (EdgeId e : edges) {
    if (!rng.bernoulli(params.p_edge_destination_change)) continue;
    const bool sole_action = graph.edge(e).destination.is_action() && action_edges(graph, team) == 1;
    Vertex destination = Vertex::action(0);
    if (rng.bernoulli(params.p_edge_destination_is_action) || sole_action) {
      destination = Vertex::action(random_action(graph, rng));
    } else if (auto t = random_team(destinations, team, rng)) {
      destination = Vertex::team(*t);
    } else {
      destination = Vertex::action(random_action(graph, rng));
    }
    graph.set_destination(e, destination);
  }

  for (EdgeId e : edges) {
    if (rng.bernoulli(params.p_program_mutate)) pending.push_back(e);
  }
  if (pending.empty()) pending.push_back(edges[rng.uniform_index(edges.size())]);

  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
  return pending;
}

Population populate(TpgGraph& graph, std::span<const TeamId> parents, const EvolutionParams& params, Rng& rng) {
  if (parents.empty()) throw Fault(FaultKind::InvalidArgument, "populate needs at least one parent");
  std::vector<TeamId> destinations;
  for (const auto& [id, team] : graph.teams()) destinations.push_back(id);
  std::vector<EdgeId> program_pool;
  for (const auto& [id, edge] : graph.edges()) program_pool.push_back(id);

  Population out;
  std::size_t roots = graph.roots().size();
  while (roots < params.nb_roots) {
    const TeamId parent = parents[rng.uniform_index(parents.size())];
    const TeamId clone = graph.clone_team(parent);
    auto pending = mutate_team(graph, clone, destinations, program_pool, params, rng);
    out.pending.insert(out.pending.end(), pending.begin(), pending.end());
    out.new_roots.push_back(clone);
    roots = graph.roots().size();
  }
  return out;
}

TeamId select_champion(const std::map<TeamId, double>& fitness) {
  if (fitness.empty()) throw Fault(FaultKind::InvalidArgument, "no fitness to select a champion from");
  auto best = fitness.begin();
  for (auto it = std::next(fitness.begin()); it != fitness.end(); ++it) {
    if (std::isnan(it->second)) continue;
    if (std::isnan(best->second) || it->second > best->second) best = it;
  }
  return best->first;
}

namespace {

std::shared_ptr<const ProgramContext> make_context(const EvolutionParams& params, const LearningEnvironment& env,
                                                   std::shared_ptr<const InstructionSet> instructions) {
  if (!instructions) throw Fault(FaultKind::InvalidArgument, "no instruction set");
  return std::make_shared<const ProgramContext>(std::move(instructions), params.nb_registers, env.state_shapes());
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

Trainer::Trainer(EvolutionParams params, std::unique_ptr<LearningEnvironment> environment,
                 std::shared_ptr<const InstructionSet> instructions, std::uint64_t seed, std::size_t nb_threads,
                 Backend backend)
    : params_((params.validate(), params)),
      environment_(environment ? std::move(environment)
                               : throw Fault(FaultKind::InvalidArgument, "no environment")),
      nb_threads_(resolve_thread_count(nb_threads)),
      backend_(backend),
      master_(seed),
      graph_(init_population(params_, environment_->action_count(),
                             make_context(params_, *environment_, std::move(instructions)), master_)),
      archive_(params_.archive_size) {}

GenerationReport Trainer::run_generation() {
  GenerationReport report;
  report.generation = generation_;
  const std::uint64_t draws_before = master_.draw_count();

  auto start = std::chrono::steady_clock::now();
  report.fitness = backend_ == Backend::Parallel
                       ? evaluate_all_policies(graph_, *environment_, params_, nb_threads_, master_, archive_)
                       : serial::evaluate_all_policies(graph_, *environment_, params_, master_, archive_);
  report.eval_ms = elapsed_ms(start);

  report.champion = select_champion(report.fitness);
  report.champion_fitness = report.fitness.at(report.champion);
  champion_ = extract_champion(graph_, report.champion);
  champion_fitness_ = report.champion_fitness;

  report.evaluated_roots = report.fitness.size();
  double sum = 0.0;
  report.best = -std::numeric_limits<double>::infinity();
  report.worst = std::numeric_limits<double>::infinity();
  for (const auto& [id, f] : report.fitness) {
    sum += f;
    report.best = std::max(report.best, f);
    report.worst = std::min(report.worst, f);
  }
  report.mean = sum / static_cast<double>(report.fitness.size());

  start = std::chrono::steady_clock::now();
  const Decimation decimation = decimate(graph_, report.fitness, params_);
  report.removed_roots = decimation.removed.size();
  report.surviving_roots = decimation.survivors.size();

  const Population population = populate(graph_, decimation.survivors, params_, master_);
  report.new_roots = population.new_roots.size();

  const std::size_t signature_threads = backend_ == Backend::Parallel ? nb_threads_ : 1;
  archive_.refresh_signatures(graph_, signature_threads);
  report.mutation_rounds =
      backend_ == Backend::Parallel
          ? parallel_mutate_programs(graph_, population.pending, params_, archive_, master_, nb_threads_)
          : serial::mutate_programs(graph_, population.pending, params_, archive_, master_);
  for (EdgeId e : population.pending) archive_.forget(e);
  report.mutated_programs = population.pending.size();
  report.mutation_ms = elapsed_ms(start);

  report.roots_after = graph_.roots().size();
  report.teams = graph_.team_count();
  report.edges = graph_.edge_count();
  std::size_t lines = 0;
  for (const auto& [id, edge] : graph_.edges()) lines += edge.program.lines.size();
  report.mean_program_length =
      report.edges == 0 ? 0.0 : static_cast<double>(lines) / static_cast<double>(report.edges);
  report.archive_size = archive_.size();
  report.master_draws = master_.draw_count() - draws_before;
  ++generation_;
  return report;
}

void Trainer::run(std::size_t count, const std::function<void(const GenerationReport&)>& on_report) {
  for (std::size_t i = 0; i < count; ++i) {
    const GenerationReport report = run_generation();
    if (on_report) on_report(report);
  }
}

}  // namespace tpg
