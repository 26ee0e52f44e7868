#include "tpg/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tpg/config.hpp"
#include "tpg/csv_log.hpp"
#include "tpg/dot.hpp"
#include "tpg/environment.hpp"
#include "tpg/evolution.hpp"
#include "tpg/parallel.hpp"

namespace tpg {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalFlags {
  std::string graph;
  std::string env = "pendulum";
  std::size_t episodes = 10;
  std::uint64_t seed = 0;
  std::size_t max_steps = 0;
};

std::optional<std::size_t> threads_from_environment() {
  const char* value = std::getenv("TPG_THREADS");
  if (value == nullptr || *value == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(value, &used);
    if (used != std::char_traits<char>::length(value)) throw std::invalid_argument(value);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Fault(FaultKind::Config, std::string("TPG_THREADS must be a non-negative integer, got '") + value + "'");
  }
}

int run_train(const std::string& config_path, const TrainOverrides& flags, std::ostream& out) {
  const RunConfig config = resolve_train_config(config_path, flags);
  if (!config.seed) throw UsageError("train needs a seed (--seed or \"seed\" in the config)");
  if (config.out.empty()) throw UsageError("train needs an output graph path (--out or \"out\" in the config)");
  Trainer trainer(config.params, make_environment(config.env), make_instruction_set(config.iset), *config.seed,
                  config.nb_threads.value_or(0));

  std::ofstream log_file;
  std::optional<CsvLog> log;
  if (!config.log.empty()) {
    log_file.open(config.log, std::ios::binary);
    if (!log_file) throw Fault(FaultKind::Io, "cannot write " + config.log);
    log.emplace(log_file, config.log_timings);
  }

  out << "training " << config.env << " with iset " << config.iset << ", seed " << *config.seed << ", "
      << trainer.thread_count() << " thread(s), " << config.params.nb_generations << " generation(s)\n";
  trainer.run(config.params.nb_generations, [&](const GenerationReport& r) {
    if (log) log->write(r);
    out << "gen " << r.generation << " best " << format_double(r.best) << " mean " << format_double(r.mean)
        << " teams " << r.teams << " edges " << r.edges << "\n";
  });
  if (!trainer.champion()) throw UsageError("nbGenerations is 0; no champion to export");
  save_text_file(config.out, export_dot(*trainer.champion()));
  out << "champion fitness " << format_double(trainer.champion_fitness()) << " written to " << config.out << "\n";
  return 0;
}

int run_eval(const EvalFlags& flags, std::ostream& out) {
  const TpgGraph graph = load_dot_file(flags.graph);
  auto env = make_environment(flags.env);
  if (env->action_count() != graph.action_count()) {
    throw Fault(FaultKind::InvalidArgument, "graph has " + std::to_string(graph.action_count()) + " actions, " +
                                                flags.env + " has " + std::to_string(env->action_count()));
  }
  const auto roots = graph.roots();
  if (roots.empty()) throw Fault(FaultKind::InvalidGraph, "graph has no root team");
  if (roots.size() > 1) out << "graph has " << roots.size() << " roots; evaluating T" << to_index(roots[0]) << "\n";

  ProgramExecutor executor(graph.context());
  Rng rng(flags.seed);
  const EvaluationSettings settings{flags.episodes, flags.max_steps, 0.0};
  const Trace trace = evaluate_policy(graph, roots[0], *env, executor, rng, settings);
  for (std::size_t i = 0; i < trace.scores.size(); ++i) {
    out << "episode " << i << " score " << format_double(trace.scores[i]) << (trace.failed[i] ? " (failed)" : "")
        << "\n";
  }
  out << "mean " << format_double(aggregate_scores(trace.scores, ScoreAggregation::Mean)) << "\n";
  return 0;
}

int run_inspect(const std::string& path, std::ostream& out) {
  const TpgGraph graph = load_dot_file(path);
  const ProgramContext& context = graph.context();
  std::size_t to_actions = 0;
  std::size_t lines = 0;
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  std::size_t longest = 0;
  std::map<std::string, std::size_t> usage;
  for (const auto& [id, edge] : graph.edges()) {
    to_actions += edge.destination.is_action() ? 1 : 0;
    const std::size_t n = edge.program.lines.size();
    lines += n;
    shortest = std::min(shortest, n);
    longest = std::max(longest, n);
    for (const Line& line : edge.program.lines) ++usage[context.instructions()[line.instruction].name()];
  }
  const std::size_t edges = graph.edge_count();
  out << "instruction set: " << context.instructions().name() << "\n";
  out << "registers: " << context.register_count() << "\n";
  out << "actions: " << graph.action_count() << "\n";
  out << "teams: " << graph.team_count() << " (" << graph.roots().size() << " root)\n";
  out << "edges: " << edges << " (" << to_actions << " to actions, " << edges - to_actions << " to teams)\n";
  if (edges > 0) {
    out << "program lines: total " << lines << ", min " << shortest << ", mean "
        << format_double(static_cast<double>(lines) / static_cast<double>(edges)) << ", max " << longest << "\n";
  }
  for (const auto& [name, count] : usage) out << "  " << name << ": " << count << "\n";
  return 0;
}

}  // namespace

RunConfig resolve_train_config(const std::string& config_path, const TrainOverrides& flags) {
  RunConfig config;
  if (!config_path.empty()) config = load_config_file(config_path);
  if (flags.seed) config.seed = flags.seed;
  if (flags.generations) config.params.nb_generations = *flags.generations;
  if (flags.env) config.env = *flags.env;
  if (flags.iset) config.iset = *flags.iset;
  if (flags.out) config.out = *flags.out;
  if (flags.log) config.log = *flags.log;
  if (flags.log_timings) config.log_timings = *flags.log_timings == "on";
  if (flags.threads) config.nb_threads = flags.threads;
  if (!config.nb_threads) config.nb_threads = threads_from_environment();
  config.validate();
  return config;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangled Program Graph training and evaluation", "tpg"};
  app.require_subcommand(1);

  std::string config_path;
  TrainOverrides train;
  auto* train_cmd = app.add_subcommand("train", "Evolve a policy and export its champion");
  train_cmd->add_option("--config", config_path, "JSON configuration file");
  train_cmd->add_option("--seed", train.seed, "Master seed");
  train_cmd->add_option("--threads", train.threads, "Worker threads, 0 for all cores (default: TPG_THREADS)");
  train_cmd->add_option("--generations", train.generations, "Number of generations");
  train_cmd->add_option("--env", train.env, "Environment name");
  train_cmd->add_option("--iset", train.iset, "Instruction set name");
  train_cmd->add_option("--out", train.out, "Champion graph output (DOT)");
  train_cmd->add_option("--log", train.log, "Training statistics output (CSV)");
  train_cmd->add_option("--log-timings", train.log_timings, "Include timing columns in the CSV log")
      ->check(CLI::IsMember({"on", "off"}));

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Run a trained graph for a few episodes");
  eval_cmd->add_option("--graph", eval.graph, "Graph file (DOT)")->required();
  eval_cmd->add_option("--env", eval.env, "Environment name");
  eval_cmd->add_option("--episodes", eval.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Episode seed");
  eval_cmd->add_option("--max-steps", eval.max_steps, "Step cap per episode, 0 for the environment horizon");

  std::string inspect_graph;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print graph statistics");
  inspect_cmd->add_option("--graph", inspect_graph, "Graph file (DOT)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) return run_train(config_path, train, out);
    if (eval_cmd->parsed()) return run_eval(eval, out);
    return run_inspect(inspect_graph, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Fault& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == FaultKind::Io || e.kind() == FaultKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tpg
