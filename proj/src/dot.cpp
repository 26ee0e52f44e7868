#include "tpg/dot.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tpg/config.hpp"

namespace tpg {

namespace {

std::string shape_text(const SourceShape& shape) {
  std::string out(to_string(shape.kind));
  if (shape.two_dimensional) out += "[" + std::to_string(shape.rows) + "]";
  out += "[" + std::to_string(shape.cols) + "]";
  return out;
}

std::string program_text(const Program& program) {
  std::string out;
  for (const Line& line : program.lines) {
    out += 'i' + std::to_string(line.instruction) + 'd' + std::to_string(line.destination) + '$';
    for (std::size_t i = 0; i < line.operands.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(line.operands[i].source) + ':' + std::to_string(line.operands[i].location);
    }
    out += ';';
  }
  return out;
}

std::string vertex_text(Vertex v) { return (v.is_team() ? "T" : "A") + std::to_string(v.id); }

/// Cursor over one line of input; every failure names the line.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line_number) : text_(text), line_(line_number) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Fault(FaultKind::Parse, "line " + std::to_string(line_) + ": " + what);
  }

  bool done() const { return text_.empty(); }
  std::string_view rest() const { return text_; }

  void skip_spaces() {
    while (!text_.empty() && (text_.front() == ' ' || text_.front() == '\t' || text_.front() == '\r')) {
      text_.remove_prefix(1);
    }
  }

  bool accept(std::string_view token) {
    if (!text_.starts_with(token)) return false;
    text_.remove_prefix(token.size());
    return true;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "' at '" + std::string(text_) + "'");
  }

  std::uint64_t number() {
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(text_.data(), text_.data() + text_.size(), value);
    if (ec != std::errc{} || end == text_.data()) fail("expected a number at '" + std::string(text_) + "'");
    text_.remove_prefix(static_cast<std::size_t>(end - text_.data()));
    return value;
  }

  std::uint32_t number32() {
    const std::uint64_t v = number();
    if (v > 0xffffffffULL) fail("number too large");
    return static_cast<std::uint32_t>(v);
  }

  Vertex vertex() {
    if (accept("T")) return Vertex::team(TeamId{number32()});
    if (accept("A")) return Vertex::action(number32());
    fail("expected a T<id> or A<id> node at '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t line_;
};

SourceShape parse_shape(std::string_view text, const Cursor& at) {
  const auto bracket = text.find('[');
  if (bracket == std::string_view::npos) at.fail("bad source shape '" + std::string(text) + "'");
  const auto kind = parse_element_kind(text.substr(0, bracket));
  if (!kind) at.fail("unknown element kind in '" + std::string(text) + "'");
  Cursor dims(text.substr(bracket), 0);
  std::vector<std::uint32_t> sizes;
  while (!dims.done()) {
    if (!dims.accept("[")) at.fail("bad source shape '" + std::string(text) + "'");
    sizes.push_back(dims.number32());
    if (!dims.accept("]")) at.fail("bad source shape '" + std::string(text) + "'");
  }
  try {
    if (sizes.size() == 1) return SourceShape::linear(*kind, sizes[0]);
    if (sizes.size() == 2) return SourceShape::grid(*kind, sizes[0], sizes[1]);
  } catch (const Fault& f) {
    at.fail(f.detail());
  }
  at.fail("bad source shape '" + std::string(text) + "'");
}

Program parse_program(Cursor& c) {
  Program program;
  while (!c.done() && c.rest().front() != '"') {
    Line line;
    c.expect("i");
    line.instruction = c.number32();
    c.expect("d");
    line.destination = c.number32();
    c.expect("$");
    do {
      Address a;
      a.source = c.number32();
      c.expect(":");
      a.location = c.number32();
      line.operands.push_back(a);
    } while (c.accept(","));
    c.expect(";");
    program.lines.push_back(std::move(line));
  }
  return program;
}

struct Header {
  std::map<std::string, std::string> fields;
  std::size_t line = 0;
};

std::string required(const Header& header, const std::string& key) {
  auto it = header.fields.find(key);
  if (it == header.fields.end()) {
    throw Fault(FaultKind::Parse, "line " + std::to_string(header.line) + ": header lacks '" + key + "'");
  }
  return it->second;
}

std::uint64_t header_number(const Header& header, const std::string& key) {
  const std::string text = required(header, key);
  Cursor c(text, header.line);
  const auto v = c.number();
  if (!c.done()) c.fail("bad value for '" + key + "'");
  return v;
}

}  // namespace

std::string export_dot(const TpgGraph& graph) {
  const ProgramContext& context = graph.context();
  std::string out = "// tpg formatVersion=" + std::to_string(kFormatVersion) + "\n";
  out += "// iset=" + context.instructions().name() + "\n";
  out += "// registers=" + std::to_string(context.register_count()) + "\n";
  out += "// actions=" + std::to_string(graph.action_count()) + "\n";
  out += "// sources=";
  const auto shapes = context.state_sources();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (i > 0) out += ';';
    out += shape_text(shapes[i]);
  }
  out += "\ndigraph tpg {\n";

  std::set<ActionId> actions;
  for (const auto& [id, edge] : graph.edges()) {
    if (edge.destination.is_action()) actions.insert(edge.destination.id);
  }
  for (const auto& [id, team] : graph.teams()) out += "  T" + std::to_string(to_index(id)) + ";\n";
  for (ActionId a : actions) out += "  A" + std::to_string(a) + " [shape=box];\n";
  for (const auto& [id, edge] : graph.edges()) {
    out += "  T" + std::to_string(to_index(edge.source)) + " -> " + vertex_text(edge.destination) + " [label=\"" +
           program_text(edge.program) + "\"];\n";
  }
  out += "}\n";
  return out;
}

TpgGraph import_dot(const std::string& text, std::shared_ptr<const InstructionSet> instructions) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_number = 0;
  Header header;
  std::optional<TpgGraph> graph;
  bool closed = false;

  while (std::getline(in, raw)) {
    ++line_number;
    Cursor c(raw, line_number);
    c.skip_spaces();
    if (c.done()) continue;
    if (closed) c.fail("content after closing brace");

    if (!graph) {
      if (c.accept("//")) {
        c.skip_spaces();
        if (c.accept("tpg ")) c.skip_spaces();
        const std::string entry(c.rest());
        const auto eq = entry.find('=');
        if (eq == std::string::npos) c.fail("header entries look like key=value");
        header.fields[entry.substr(0, eq)] = entry.substr(eq + 1);
        header.line = line_number;
        continue;
      }
      c.expect("digraph tpg {");
      c.skip_spaces();
      if (!c.done()) c.fail("unexpected text after 'digraph tpg {'");
      header.line = line_number;

      if (header_number(header, "formatVersion") != static_cast<std::uint64_t>(kFormatVersion)) {
        c.fail("unsupported formatVersion " + required(header, "formatVersion"));
      }
      const std::string iset_name = required(header, "iset");
      if (instructions) {
        if (instructions->name() != iset_name) {
          c.fail("graph uses instruction set '" + iset_name + "', given '" + instructions->name() + "'");
        }
      } else {
        try {
          instructions = make_instruction_set(iset_name);
        } catch (const Fault& f) {
          c.fail(f.detail());
        }
      }
      std::vector<SourceShape> shapes;
      const std::string layout_text = required(header, "sources");
      std::string_view layout = layout_text;
      while (!layout.empty()) {
        const auto semi = layout.find(';');
        shapes.push_back(parse_shape(layout.substr(0, semi), c));
        if (semi == std::string_view::npos) break;
        layout.remove_prefix(semi + 1);
      }
      try {
        auto context = std::make_shared<const ProgramContext>(
            instructions, static_cast<std::size_t>(header_number(header, "registers")), std::move(shapes));
        graph.emplace(std::move(context), static_cast<std::size_t>(header_number(header, "actions")));
      } catch (const Fault& f) {
        if (f.kind() == FaultKind::Parse) throw;
        c.fail(f.detail());
      }
      continue;
    }

    if (c.accept("}")) {
      c.skip_spaces();
      if (!c.done()) c.fail("unexpected text after '}'");
      closed = true;
      continue;
    }

    const Vertex from = c.vertex();
    c.skip_spaces();
    if (!c.accept("->")) {
      if (c.accept("[")) {
        const auto close = c.rest().find("];");
        if (close == std::string_view::npos) c.fail("unterminated attribute list");
        Cursor tail(c.rest().substr(close + 2), line_number);
        tail.skip_spaces();
        if (!tail.done()) tail.fail("unexpected text after node statement");
      } else {
        c.expect(";");
        c.skip_spaces();
        if (!c.done()) c.fail("unexpected text after node statement");
      }
      try {
        if (from.is_team()) {
          graph->add_team(from.team_id());
        } else if (from.id >= graph->action_count()) {
          c.fail("action A" + std::to_string(from.id) + " out of range");
        }
      } catch (const Fault& f) {
        if (f.kind() == FaultKind::Parse) throw;
        c.fail(f.detail());
      }
      continue;
    }

    c.skip_spaces();
    const Vertex to = c.vertex();
    c.skip_spaces();
    c.expect("[label=\"");
    Program program = parse_program(c);
    c.expect("\"];");
    c.skip_spaces();
    if (!c.done()) c.fail("unexpected text after edge statement");
    if (!from.is_team()) c.fail("edges must start at a team");

    const auto problems = validate_program(program, graph->context());
    if (!problems.empty()) c.fail(problems.front());
    try {
      graph->add_edge(from.team_id(), to, std::move(program));
    } catch (const Fault& f) {
      c.fail(f.detail());
    }
  }

  if (!graph) throw Fault(FaultKind::Parse, "line " + std::to_string(line_number) + ": no digraph found");
  if (!closed) throw Fault(FaultKind::Parse, "line " + std::to_string(line_number) + ": missing closing brace");
  const auto problems = check_invariants(*graph);
  if (!problems.empty()) {
    throw Fault(FaultKind::InvalidGraph, "line " + std::to_string(line_number) + ": " + problems.front());
  }
  return std::move(*graph);
}

TpgGraph load_dot_file(const std::string& path, std::shared_ptr<const InstructionSet> instructions) {
  std::ifstream in(path);
  if (!in) throw Fault(FaultKind::Io, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return import_dot(text.str(), std::move(instructions));
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fault(FaultKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Fault(FaultKind::Io, "failed writing " + path);
}

}  // namespace tpg
