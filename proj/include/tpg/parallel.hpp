#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpg/archive.hpp"
#include "tpg/environment.hpp"
#include "tpg/graph.hpp"
#include "tpg/params.hpp"
#include "tpg/rng.hpp"

namespace tpg {

/// Master/worker execution with a distributed PRNG.
///
/// The master generator is only touched by the calling thread: it draws one
/// seed per job, in job-id order, before any worker starts. Each job reseeds
/// the worker's private generator from its seed, so a job's outcome depends
/// on nothing but its seed and payload. Workers poll a single shared job
/// queue; results are sorted by job id before the master merges them. The
/// merged outcome is therefore identical for every thread count.

struct Job {
  std::uint64_t id = 0;
  std::uint64_t seed = 0;
  std::uint64_t payload = 0;  // team id or edge id
};

/// Everything one policy evaluation produced.
struct Trace {
  std::vector<double> scores;  // one per episode
  std::vector<bool> failed;    // episode ended by an environment fault
  std::vector<StateSnapshot> snapshots;  // archive candidates, recording order
  std::size_t steps = 0;
};

struct EvalResult {
  std::uint64_t job_id = 0;
  Trace trace;
  std::string error;  // non-empty when the job faulted
};

/// Pre-filled queue drained exactly once; safe for concurrent consumers.
class JobQueue {
 public:
  explicit JobQueue(std::vector<Job> jobs) : jobs_(std::move(jobs)) {}

  std::optional<Job> next() noexcept {
    const std::size_t i = cursor_.fetch_add(1, std::memory_order_relaxed);
    if (i >= jobs_.size()) return std::nullopt;
    return jobs_[i];
  }
  std::size_t size() const noexcept { return jobs_.size(); }

 private:
  std::vector<Job> jobs_;
  std::atomic<std::size_t> cursor_{0};
};

/// Completed results; safe for concurrent producers.
class ResultQueue {
 public:
  void push(EvalResult result) {
    std::lock_guard lock(mutex_);
    results_.push_back(std::move(result));
  }

  /// Takes every result, sorted by job id.
  std::vector<EvalResult> drain_sorted();

 private:
  std::mutex mutex_;
  std::vector<EvalResult> results_;
};

struct EvaluationSettings {
  std::size_t episodes = 1;
  std::size_t max_steps = 0;  // 0: environment horizon
  double archiving_probability = 0.0;

  static EvaluationSettings from(const EvolutionParams& params);
};

/// Next master draw, used as a job seed.
inline std::uint64_t derive_seed(Rng& master) { return master.next_u64(); }

/// Worker thread count: 0 means the detected hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested) noexcept;

/// Runs the policy rooted at `root` for `settings.episodes` episodes. Each
/// episode resets `env` with a fresh draw from `worker`, then infers and steps
/// until terminal or the step cap; the episode score is the environment score
/// at that point. Before every inference one `worker` draw decides whether
/// the current state is kept as an archive candidate. Environment faults end
/// the episode with the environment's minimum score.
Trace evaluate_policy(const TpgGraph& graph, TeamId root, LearningEnvironment& env, ProgramExecutor& executor,
                      Rng& worker, const EvaluationSettings& settings);

/// Polls `jobs` until empty: reseeds a private generator from each job,
/// evaluates the root team named by the payload and pushes the result.
void worker_loop(const TpgGraph& graph, JobQueue& jobs, ResultQueue& results, LearningEnvironment& env,
                 const EvaluationSettings& settings);

double aggregate_scores(std::span<const double> scores, ScoreAggregation how);

/// One job per root (ascending id, seeds from `master` in that order), run by
/// `nb_threads` threads with the caller acting as one of them. Results are
/// merged in job order: archive candidates go through archive_maybe_record
/// with `master`, and each root's fitness is the aggregate of its episode
/// scores. Any job fault aborts the phase with WorkerFault before merging.
std::map<TeamId, double> evaluate_all_policies(const TpgGraph& graph, const LearningEnvironment& prototype,
                                               const EvolutionParams& params, std::size_t nb_threads, Rng& master,
                                               Archive& archive);

/// One job per edge (ascending id); each runs mutate_program on that edge's
/// program with a generator seeded from the job. `archive` must already hold
/// fresh signatures and is only read. Returns the total rounds applied.
std::size_t parallel_mutate_programs(TpgGraph& graph, std::span<const EdgeId> edges, const EvolutionParams& params,
                                     const Archive& archive, Rng& master, std::size_t nb_threads);

/// Bid vectors of the programs of `edges` over `snapshots`, in `edges` order.
std::vector<std::vector<double>> compute_bid_vectors(const TpgGraph& graph, std::span<const EdgeId> edges,
                                                     std::span<const StateSnapshot> snapshots,
                                                     std::size_t nb_threads);

}  // namespace tpg
