// Compares the serial reference kernels with the OpenMP ones on a pendulum
// population: policy evaluation, program mutation and signature computation.

#include <chrono>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "tpg/csv_log.hpp"
#include "tpg/evolution.hpp"
#include "tpg/mutation.hpp"
#include "tpg/parallel.hpp"
#include "tpg/pendulum.hpp"
#include "tpg/serial_reference.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Setup {
  tpg::EvolutionParams params;
  tpg::PendulumEnv env;
  tpg::TpgGraph graph;
};

Setup make_setup(std::size_t roots, std::size_t horizon, const std::string& iset, std::uint64_t seed) {
  tpg::EvolutionParams params;
  params.nb_roots = roots;
  params.max_steps_per_evaluation = horizon;
  tpg::PendulumConfig config;
  config.horizon = horizon;
  tpg::PendulumEnv env(config);
  auto context = std::make_shared<const tpg::ProgramContext>(tpg::make_instruction_set(iset), params.nb_registers,
                                                             env.state_shapes());
  tpg::Rng rng(seed);
  auto graph = tpg::init_population(params, env.action_count(), context, rng);
  return {params, env, std::move(graph)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel timings", "tpg_bench"};
  std::size_t roots = 500;
  std::size_t horizon = 500;
  std::string iset = "simple";
  std::uint64_t seed = 7;
  std::vector<std::size_t> threads{1, 2, 4, 8};
  app.add_option("--roots", roots, "Population size");
  app.add_option("--horizon", horizon, "Steps per episode");
  app.add_option("--iset", iset, "Instruction set");
  app.add_option("--seed", seed, "Seed");
  app.add_option("--threads", threads, "Thread counts to time")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  Setup setup = make_setup(roots, horizon, iset, seed);
  std::cout << "roots " << roots << ", horizon " << horizon << ", iset " << iset << ", hardware threads "
            << std::thread::hardware_concurrency() << "\n";

  tpg::Rng master(seed);
  tpg::Archive serial_archive(setup.params.archive_size);
  auto start = Clock::now();
  const auto reference = tpg::serial::evaluate_all_policies(setup.graph, setup.env, setup.params, master,
                                                            serial_archive);
  const double serial_eval = ms_since(start);
  std::cout << std::fixed << std::setprecision(1);
  std::cout << "evaluation  serial      " << serial_eval << " ms\n";
  for (std::size_t n : threads) {
    tpg::Rng m(seed);
    tpg::Archive archive(setup.params.archive_size);
    start = Clock::now();
    const auto fitness = tpg::evaluate_all_policies(setup.graph, setup.env, setup.params, n, m, archive);
    const double t = ms_since(start);
    std::cout << "evaluation  " << std::setw(2) << n << " thread(s) " << t << " ms  speedup "
              << std::setprecision(2) << serial_eval / t << std::setprecision(1)
              << (fitness == reference && archive == serial_archive ? "" : "  MISMATCH") << "\n";
  }

  std::vector<tpg::EdgeId> edges;
  for (const auto& [id, edge] : setup.graph.edges()) edges.push_back(id);
  serial_archive.refresh_signatures(setup.graph, 1);

  start = Clock::now();
  const auto reference_bids =
      tpg::serial::compute_bid_vectors(setup.graph, edges, serial_archive.snapshots());
  const double serial_bids = ms_since(start);
  std::cout << "signatures  serial      " << serial_bids << " ms (" << edges.size() << " programs, "
            << serial_archive.size() << " snapshots)\n";
  for (std::size_t n : threads) {
    start = Clock::now();
    const auto bids = tpg::compute_bid_vectors(setup.graph, edges, serial_archive.snapshots(), n);
    const double t = ms_since(start);
    std::cout << "signatures  " << std::setw(2) << n << " thread(s) " << t << " ms"
              << (bids == reference_bids ? "" : "  MISMATCH") << "\n";
  }

  tpg::TpgGraph serial_graph = setup.graph;
  tpg::Rng serial_master(seed + 1);
  start = Clock::now();
  tpg::serial::mutate_programs(serial_graph, edges, setup.params, serial_archive, serial_master);
  const double serial_mut = ms_since(start);
  std::cout << "mutation    serial      " << serial_mut << " ms\n";
  for (std::size_t n : threads) {
    tpg::TpgGraph graph = setup.graph;
    tpg::Rng m(seed + 1);
    start = Clock::now();
    tpg::parallel_mutate_programs(graph, edges, setup.params, serial_archive, m, n);
    const double t = ms_since(start);
    std::cout << "mutation    " << std::setw(2) << n << " thread(s) " << t << " ms"
              << (graph == serial_graph ? "" : "  MISMATCH") << "\n";
  }
  return 0;
}
