#include "tpg/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <thread>
#include <unordered_map>

#include "tpg/mutation.hpp"

namespace tpg {

std::vector<EvalResult> ResultQueue::drain_sorted() {
  std::lock_guard lock(mutex_);
  std::vector<EvalResult> out = std::move(results_);
  results_.clear();
  std::sort(out.begin(), out.end(), [](const EvalResult& a, const EvalResult& b) { return a.job_id < b.job_id; });
  return out;
}

EvaluationSettings EvaluationSettings::from(const EvolutionParams& params) {
  return {params.nb_iterations_per_policy_evaluation, params.max_steps_per_evaluation,
          params.archiving_probability};
}

std::size_t resolve_thread_count(std::size_t requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

/// Runs `body` on `nb_threads` OpenMP threads, the caller included. The first
/// exception thrown by any thread is rethrown after the join.
template <typename Body>
void run_team(std::size_t nb_threads, Body&& body) {
  std::exception_ptr error;
  std::mutex error_mutex;
  omp_set_dynamic(0);
#pragma omp parallel num_threads(static_cast<int>(nb_threads))
  {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

Trace evaluate_policy(const TpgGraph& graph, TeamId root, LearningEnvironment& env, ProgramExecutor& executor,
                      Rng& worker, const EvaluationSettings& settings) {
  Trace trace;
  const std::size_t cap = settings.max_steps > 0 ? settings.max_steps : env.horizon();
  std::vector<EdgeId> visited;
  const auto sources = env.state_sources();
  executor.bind(sources);
  // The binding is fixed for the whole evaluation, so each program is
  // compiled once on first use.
  std::unordered_map<const Program*, CompiledProgram> compiled;
  const auto bid = [&](const Edge& edge) {
    auto it = compiled.find(&edge.program);
    if (it == compiled.end()) it = compiled.emplace(&edge.program, executor.compile(edge.program)).first;
    return executor.run(it->second, edge.program);
  };
  for (std::size_t episode = 0; episode < settings.episodes; ++episode) {
    env.reset(worker.next_u64());
    bool failed = false;
    for (std::size_t step = 0; step < cap && !env.is_terminal(); ++step) {
      if (worker.bernoulli(settings.archiving_probability)) trace.snapshots.push_back(env.snapshot());
      const ActionId action = infer(graph, root, bid, visited);
      ++trace.steps;
      try {
        env.step(action);
      } catch (const Fault& fault) {
        if (fault.kind() != FaultKind::EnvironmentFault) throw;
        failed = true;
        break;
      }
    }
    trace.scores.push_back(failed ? env.min_score() : env.score());
    trace.failed.push_back(failed);
  }
  return trace;
}

void worker_loop(const TpgGraph& graph, JobQueue& jobs, ResultQueue& results, LearningEnvironment& env,
                 const EvaluationSettings& settings) {
  ProgramExecutor executor(graph.context());
  Rng worker;
  while (auto job = jobs.next()) {
    EvalResult result;
    result.job_id = job->id;
    try {
      worker.reset(job->seed);
      result.trace = evaluate_policy(graph, TeamId{static_cast<std::uint32_t>(job->payload)}, env, executor,
                                     worker, settings);
    } catch (const std::exception& e) {
      result.error = e.what();
    }
    results.push(std::move(result));
  }
}

double aggregate_scores(std::span<const double> scores, ScoreAggregation how) {
  if (scores.empty()) return 0.0;
  switch (how) {
    case ScoreAggregation::Mean: {
      double sum = 0.0;
      for (double s : scores) sum += s;
      return sum / static_cast<double>(scores.size());
    }
    case ScoreAggregation::Min: return *std::min_element(scores.begin(), scores.end());
    case ScoreAggregation::Median: {
      std::vector<double> sorted(scores.begin(), scores.end());
      std::sort(sorted.begin(), sorted.end());
      const std::size_t mid = sorted.size() / 2;
      return sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
  }
  return 0.0;
}

std::map<TeamId, double> evaluate_all_policies(const TpgGraph& graph, const LearningEnvironment& prototype,
                                               const EvolutionParams& params, std::size_t nb_threads, Rng& master,
                                               Archive& archive) {
  const std::vector<TeamId> roots = graph.roots();
  std::vector<Job> jobs;
  jobs.reserve(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) jobs.push_back({i, derive_seed(master), to_index(roots[i])});

  JobQueue queue(std::move(jobs));
  ResultQueue results;
  const auto settings = EvaluationSettings::from(params);
  run_team(resolve_thread_count(nb_threads), [&] {
    auto env = prototype.clone();
    worker_loop(graph, queue, results, *env, settings);
  });

  auto sorted = results.drain_sorted();
  if (sorted.size() != roots.size()) {
    throw Fault(FaultKind::WorkerFault, "expected " + std::to_string(roots.size()) + " results, got " +
                                            std::to_string(sorted.size()));
  }
  for (const auto& r : sorted) {
    if (!r.error.empty()) {
      throw Fault(FaultKind::WorkerFault, "job " + std::to_string(r.job_id) + " (T" +
                                              std::to_string(to_index(roots[r.job_id])) + "): " + r.error);
    }
  }

  std::map<TeamId, double> fitness;
  for (auto& r : sorted) {
    for (auto& snapshot : r.trace.snapshots) {
      archive_maybe_record(archive, std::move(snapshot), params.archiving_probability, master);
    }
    fitness.emplace(roots[r.job_id], aggregate_scores(r.trace.scores, params.aggregation));
  }
  return fitness;
}

std::size_t parallel_mutate_programs(TpgGraph& graph, std::span<const EdgeId> edges, const EvolutionParams& params,
                                     const Archive& archive, Rng& master, std::size_t nb_threads) {
  std::vector<EdgeId> ordered(edges.begin(), edges.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  if (ordered.empty()) return 0;

  // Resolved before the parallel phase: the map itself is not touched by workers.
  std::vector<Program*> programs;
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    programs.push_back(&graph.program(ordered[i]));
    jobs.push_back({i, derive_seed(master), to_index(ordered[i])});
  }

  JobQueue queue(std::move(jobs));
  std::atomic<std::size_t> rounds{0};
  const ProgramContext& context = graph.context();
  run_team(resolve_thread_count(nb_threads), [&] {
    ProgramExecutor executor(context);
    Rng worker;
    while (auto job = queue.next()) {
      worker.reset(job->seed);
      rounds += mutate_program(*programs[job->id], params, context, archive, worker, executor);
    }
  });
  return rounds.load();
}

std::vector<std::vector<double>> compute_bid_vectors(const TpgGraph& graph, std::span<const EdgeId> edges,
                                                     std::span<const StateSnapshot> snapshots,
                                                     std::size_t nb_threads) {
  std::vector<const Program*> programs;
  programs.reserve(edges.size());
  for (EdgeId e : edges) programs.push_back(&graph.edge(e).program);

  std::vector<std::vector<double>> out(edges.size());
  if (edges.empty()) return out;
  const ProgramContext& context = graph.context();
  const auto count = static_cast<std::int64_t>(programs.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  omp_set_dynamic(0);
#pragma omp parallel num_threads(static_cast<int>(resolve_thread_count(nb_threads)))
  {
    ProgramExecutor executor(context);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = bids_on(executor, *programs[static_cast<std::size_t>(i)], snapshots);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace tpg
