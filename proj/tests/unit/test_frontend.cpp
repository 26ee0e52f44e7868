#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tpg/cli.hpp"
#include "tpg/config.hpp"
#include "tpg/csv_log.hpp"
#include "tpg/dot.hpp"
#include "tpg/pendulum.hpp"

using namespace tpg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("tpg_unit_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

Fault fault_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Fault& f) {
    return f;
  }
  FAIL("expected a fault");
  return Fault(FaultKind::Io, "unreachable");
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tpg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class ScopedEnvVar {
 public:
  ScopedEnvVar(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value) {
      ::setenv(name, value, 1);
    } else {
      ::unsetenv(name);
    }
  }
  ~ScopedEnvVar() {
    if (old_) {
      ::setenv(name_, old_->c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

const std::string kSmallRun = R"({"nbRoots": 10, "nbGenerations": 2, "maxStepsPerEvaluation": 20, "maxProgramSize": 8})";

TpgGraph two_team_graph() {
  auto ctx = fixtures::context(make_instruction_set("simple"), {SourceShape::linear(ElementKind::Float64, 2)});
  TpgGraph g(ctx, 3);
  const TeamId t0 = g.add_team();
  const TeamId t1 = g.add_team();
  g.add_edge(t0, Vertex::action(2), Program{{Line{0, 0, {{1, 0}, {0, 3}}}}});
  g.add_edge(t0, Vertex::team(t1), Program{{Line{4, 1, {{1, 1}, {1, 0}}}, Line{2, 0, {{0, 1}, {0, 1}}}}});
  g.add_edge(t1, Vertex::action(0), Program{{Line{3, 0, {{1, 0}, {1, 1}}}}});
  g.add_edge(t1, Vertex::action(2), Program{{Line{1, 0, {{1, 1}, {1, 0}}}}});
  return g;
}

const std::string kTwoTeamDot =
    "// tpg formatVersion=1\n"
    "// iset=simple\n"
    "// registers=8\n"
    "// actions=3\n"
    "// sources=float64[2]\n"
    "digraph tpg {\n"
    "  T0;\n"
    "  T1;\n"
    "  A0 [shape=box];\n"
    "  A2 [shape=box];\n"
    "  T0 -> A2 [label=\"i0d0$1:0,0:3;\"];\n"
    "  T0 -> T1 [label=\"i4d1$1:1,1:0;i2d0$0:1,0:1;\"];\n"
    "  T1 -> A0 [label=\"i3d0$1:0,1:1;\"];\n"
    "  T1 -> A2 [label=\"i1d0$1:1,1:0;\"];\n"
    "}\n";

std::string replace_line(const std::string& text, std::size_t line_number, const std::string& replacement) {
  std::istringstream in(text);
  std::string out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) out += (n == line_number ? replacement : line) + "\n";
  return out;
}

}  // namespace

TEST_SUITE("frontend") {
  TEST_CASE("an empty config keeps every default") {
    CHECK(load_config("{}") == RunConfig{});
    const RunConfig c = load_config("{}");
    CHECK(c.params.nb_roots == 100);
    CHECK(c.params.ratio_deleted_roots == 0.85);
    CHECK(c.env == "pendulum");
    CHECK_FALSE(c.seed.has_value());
  }

  TEST_CASE("config values override defaults") {
    const RunConfig c = load_config(R"({
      "nbRoots": 50, "ratioDeletedRoots": 0.5, "seed": 3, "iset": "complex", "env": "tictactoe",
      "aggregation": "median", "nbThreads": 2, "logTimings": false, "formatVersion": 1, "pLineSwap": 0.25
    })");
    CHECK(c.params.nb_roots == 50);
    CHECK(c.params.ratio_deleted_roots == 0.5);
    CHECK(c.seed == 3u);
    CHECK(c.iset == "complex");
    CHECK(c.env == "tictactoe");
    CHECK(c.params.aggregation == ScoreAggregation::Median);
    CHECK(c.nb_threads == 2u);
    CHECK_FALSE(c.log_timings);
    CHECK(c.params.p_line_swap == 0.25);
  }

  TEST_CASE("config round trip through canonical JSON") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
      RunConfig c;
      c.params.nb_roots = 2 + rng.uniform_index(300);
      c.params.ratio_deleted_roots = 0.5 + 0.45 * rng.uniform01();
      c.params.p_edge_add = rng.uniform01();
      c.params.archiving_probability = rng.uniform01();
      c.params.max_program_size = 1 + rng.uniform_index(200);
      c.params.aggregation = static_cast<ScoreAggregation>(rng.uniform_index(3));
      if (rng.bernoulli(0.5)) c.seed = rng.next_u64();
      if (rng.bernoulli(0.5)) c.nb_threads = rng.uniform_index(16);
      c.iset = rng.bernoulli(0.5) ? "simple" : "complex";
      c.out = "champion" + std::to_string(i) + ".dot";
      c.log_timings = rng.bernoulli(0.5);
      const std::string text = to_json(c);
      CHECK(load_config(text) == c);
      CHECK(to_json(load_config(text)) == text);
    }
  }

  TEST_CASE("config errors name the key") {
    auto config_fault = [](const std::string& text) { return fault_of([&] { (void)load_config(text); }); };
    Fault f = config_fault(R"({"bogus": 1})");
    CHECK(f.kind() == FaultKind::Config);
    CHECK(f.detail() == "bogus: unknown key");
    f = config_fault(R"({"nbRoots": -1})");
    CHECK(f.kind() == FaultKind::Config);
    CHECK(f.detail().starts_with("nbRoots"));
    f = config_fault(R"({"nbRoots": "many"})");
    CHECK(f.detail() == "nbRoots: expected a non-negative integer");
    f = config_fault(R"({"ratioDeletedRoots": 1.5})");
    CHECK(f.kind() == FaultKind::Config);
    CHECK(f.detail().find("ratioDeletedRoots") != std::string::npos);
    f = config_fault(R"({"env": "cartpole"})");
    CHECK(f.detail() == "env: unknown environment 'cartpole'");
    f = config_fault(R"({"formatVersion": 2})");
    CHECK(f.kind() == FaultKind::Config);
    CHECK(config_fault(R"({"nbRoots": 5,)").kind() == FaultKind::Parse);
    CHECK(config_fault("[1, 2]").kind() == FaultKind::Parse);
    CHECK(fault_of([] { (void)load_config_file("/nonexistent/tpg.json"); }).kind() == FaultKind::Io);
  }

  TEST_CASE("flags override the config file, which overrides TPG_THREADS") {
    TempDir dir;
    const std::string path = dir.file("run.json");
    write_file(path, R"({"seed": 5, "nbThreads": 3, "nbGenerations": 7, "iset": "complex", "out": "a.dot",
                         "log": "a.csv", "logTimings": false, "env": "pendulum"})");
    ScopedEnvVar threads("TPG_THREADS", "6");

    RunConfig c = resolve_train_config(path, {});
    CHECK(c.seed == 5u);
    CHECK(c.nb_threads == 3u);
    CHECK(c.params.nb_generations == 7);
    CHECK(c.iset == "complex");
    CHECK(c.out == "a.dot");
    CHECK(c.log == "a.csv");
    CHECK_FALSE(c.log_timings);

    TrainOverrides flags;
    flags.seed = 9;
    flags.threads = 1;
    flags.generations = 2;
    flags.iset = "simple";
    flags.env = "tictactoe";
    flags.out = "b.dot";
    flags.log = "b.csv";
    flags.log_timings = "on";
    c = resolve_train_config(path, flags);
    CHECK(c.seed == 9u);
    CHECK(c.nb_threads == 1u);
    CHECK(c.params.nb_generations == 2);
    CHECK(c.iset == "simple");
    CHECK(c.env == "tictactoe");
    CHECK(c.out == "b.dot");
    CHECK(c.log == "b.csv");
    CHECK(c.log_timings);

    write_file(path, R"({"seed": 5})");
    CHECK(resolve_train_config(path, {}).nb_threads == 6u);
    flags = {};
    flags.threads = 2;
    CHECK(resolve_train_config(path, flags).nb_threads == 2u);
    {
      ScopedEnvVar unset("TPG_THREADS", nullptr);
      CHECK_FALSE(resolve_train_config(path, {}).nb_threads.has_value());
    }
    {
      ScopedEnvVar junk("TPG_THREADS", "lots");
      CHECK(fault_of([&] { (void)resolve_train_config(path, {}); }).kind() == FaultKind::Config);
    }
  }

  TEST_CASE("DOT export of a small graph") {
    CHECK(export_dot(two_team_graph()) == kTwoTeamDot);
    const TpgGraph back = import_dot(kTwoTeamDot);
    CHECK(back == two_team_graph());
    CHECK(export_dot(back) == kTwoTeamDot);
  }

  TEST_CASE("DOT round trips preserve the graph and its decisions") {
    Rng rng(40);
    const auto shapes = fixtures::mixed_shapes();
    const auto ctx = fixtures::context(fixtures::mixed_set(), shapes, 5);
    for (int i = 0; i < 40; ++i) {
      const TpgGraph g = fixtures::random_graph(ctx, 2 + rng.uniform_index(6), 1 + rng.uniform_index(10), 5, 10, rng);
      const std::string first = export_dot(g);
      const TpgGraph once = import_dot(first);
      const std::string second = export_dot(once);
      CHECK(second == first);
      CHECK(export_dot(import_dot(second)) == first);
      CHECK(once.context() == g.context());
      ProgramExecutor a(g.context());
      ProgramExecutor b(once.context());
      for (int s = 0; s < 10; ++s) {
        const auto snapshot = fixtures::random_snapshot(shapes, rng);
        a.bind(snapshot);
        b.bind(snapshot);
        CHECK(infer(g, g.roots()[0], a).action == infer(once, once.roots()[0], b).action);
      }
    }
  }

  TEST_CASE("DOT import errors carry line numbers") {
    auto parse_fault = [](const std::string& text) { return fault_of([&] { (void)import_dot(text); }); };
    Fault f = parse_fault(replace_line(kTwoTeamDot, 13, "  T1 -> A0 [label=\"i3d0$1:0 1:1;\"];"));
    CHECK(f.kind() == FaultKind::Parse);
    CHECK(f.detail().starts_with("line 13: "));

    f = parse_fault(replace_line(kTwoTeamDot, 13, "  T1 -> A0 [label=\"i3d0$1:0,1:7;\"];"));
    CHECK(f.detail() == "line 13: line 0: operand 1 address out of range");

    f = parse_fault(replace_line(kTwoTeamDot, 13, "  T1 -> T1 [label=\"i3d0$1:0,1:1;\"];"));
    CHECK(f.detail() == "line 13: self-loop forbidden on T1");

    f = parse_fault(replace_line(kTwoTeamDot, 2, "// iset=fancy"));
    CHECK(f.detail().starts_with("line 6: "));
    CHECK(f.detail().find("fancy") != std::string::npos);

    f = parse_fault(replace_line(kTwoTeamDot, 1, "// tpg formatVersion=9"));
    CHECK(f.detail().starts_with("line 6: unsupported formatVersion"));

    f = parse_fault(replace_line(kTwoTeamDot, 15, ""));
    CHECK(f.detail() == "line 15: missing closing brace");

    f = parse_fault(replace_line(kTwoTeamDot, 14, ""));
    CHECK(f.kind() == FaultKind::InvalidGraph);
    CHECK(f.detail().find("T1: fewer than 2 outgoing edges") != std::string::npos);

    f = parse_fault(replace_line(kTwoTeamDot, 8, "  T0;;"));
    CHECK(f.detail().starts_with("line 8: "));

    f = fault_of([] { (void)import_dot(kTwoTeamDot, make_instruction_set("complex")); });
    CHECK(f.detail() == "line 6: graph uses instruction set 'simple', given 'complex'");

    CHECK(fault_of([] { (void)load_dot_file("/nonexistent/graph.dot"); }).kind() == FaultKind::Io);
  }

  TEST_CASE("CSV rows parse back to the reported values") {
    GenerationReport r;
    r.generation = 3;
    r.best = -123.456789012345678;
    r.mean = 1.0 / 3.0;
    r.worst = -1e300;
    r.teams = 140;
    r.edges = 420;
    r.mean_program_length = 11.2;
    r.eval_ms = 2.5;
    r.mutation_ms = 0.125;
    std::ostringstream out;
    CsvLog log(out, false);
    log.write(r);
    CHECK(out.str().starts_with("generation,best,mean,worst,teams,edges,meanProgramLength\n3,"));
    std::istringstream rows(out.str());
    std::string header;
    std::string row;
    std::getline(rows, header);
    std::getline(rows, row);
    std::vector<std::string> cells;
    std::stringstream cell_stream(row);
    for (std::string cell; std::getline(cell_stream, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::stod(cells[1]) == r.best);
    CHECK(std::stod(cells[2]) == r.mean);
    CHECK(std::stod(cells[3]) == r.worst);
    CHECK(cells[4] == "140");
    CHECK(std::stod(cells[6]) == r.mean_program_length);
    CHECK(CsvLog::row(r, true).ends_with(",2.5,0.125\n"));
    CHECK(CsvLog::header(true).ends_with(",evalMs,mutationMs\n"));
  }

  TEST_CASE("CLI exit codes") {
    TempDir dir;
    CHECK(cli({}).code == 2);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"train", "--bogus"}).code == 2);
    CHECK(cli({"train", "--out", dir.file("x.dot")}).code == 2);  // no seed
    CHECK(cli({"train", "--seed", "1"}).code == 2);              // no output
    CHECK(cli({"train", "--config", dir.file("missing.json"), "--seed", "1", "--out", dir.file("x.dot")}).code == 2);
    write_file(dir.file("bad.json"), R"({"nbRoots": 0})");
    const CliRun bad = cli({"train", "--config", dir.file("bad.json"), "--seed", "1", "--out", dir.file("x.dot")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("nbRoots") != std::string::npos);
    CHECK(cli({"train", "--seed", "1", "--out", dir.file("x.dot"), "--log-timings", "maybe"}).code == 2);
    CHECK(cli({"eval", "--graph", dir.file("missing.dot")}).code == 2);
    write_file(dir.file("g.dot"), kTwoTeamDot);
    const CliRun wrong_env = cli({"eval", "--graph", dir.file("g.dot")});  // 3 actions vs 7
    CHECK(wrong_env.code == 1);
    CHECK(wrong_env.err.find("actions") != std::string::npos);
    write_file(dir.file("broken.dot"), replace_line(kTwoTeamDot, 14, ""));
    CHECK(cli({"inspect", "--graph", dir.file("broken.dot")}).code == 1);
  }

  TEST_CASE("CLI train, eval and inspect") {
    TempDir dir;
    ScopedEnvVar threads("TPG_THREADS", nullptr);
    write_file(dir.file("run.json"), kSmallRun);
    auto train = [&](const std::string& tag, const std::string& seed) {
      return cli({"train", "--config", dir.file("run.json"), "--seed", seed, "--threads", "2", "--out",
                  dir.file(tag + ".dot"), "--log", dir.file(tag + ".csv"), "--log-timings", "off"});
    };
    const CliRun a = train("a", "4");
    REQUIRE(a.code == 0);
    CHECK(a.out.find("gen 1 best ") != std::string::npos);
    REQUIRE(train("b", "4").code == 0);
    REQUIRE(train("c", "5").code == 0);
    CHECK(read_file(dir.file("a.dot")) == read_file(dir.file("b.dot")));
    CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
    CHECK_FALSE(read_file(dir.file("a.dot")) == read_file(dir.file("c.dot")));
    CHECK(read_file(dir.file("a.csv")).starts_with(CsvLog::header(false)));

    const CliRun eval = cli({"eval", "--graph", dir.file("a.dot"), "--episodes", "3", "--max-steps", "20"});
    CHECK(eval.code == 0);
    CHECK(eval.out.find("episode 2 score ") != std::string::npos);
    CHECK(eval.out.find("mean ") != std::string::npos);
    CHECK(cli({"eval", "--graph", dir.file("a.dot"), "--episodes", "3", "--max-steps", "20"}).out == eval.out);

    const CliRun inspect = cli({"inspect", "--graph", dir.file("a.dot")});
    CHECK(inspect.code == 0);
    CHECK(inspect.out.find("instruction set: simple") != std::string::npos);
    CHECK(inspect.out.find("actions: 7") != std::string::npos);
  }
}
