#include "fixtures.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "tpg/mutation.hpp"

namespace fixtures {

using tpg::ElementKind;

std::shared_ptr<const tpg::InstructionSet> mixed_set() {
  static const auto set = [] {
    std::vector<tpg::Instruction> ins;
    ins.push_back(tpg::make_lambda_instruction<double, double>("add", [](double a, double b) { return a + b; }));
    ins.push_back(tpg::make_lambda_instruction<double, std::int8_t>(
        "scale", [](double a, std::int8_t b) { return a * b; }));
    ins.push_back(tpg::make_lambda_instruction<std::int64_t, std::array<std::int8_t, 2>>(
        "dot", [](std::int64_t a, const std::array<std::int8_t, 2>& b) {
          return static_cast<double>(a * (b[0] + b[1]));
        }));
    ins.push_back(tpg::make_lambda_instruction<std::array<std::array<std::int8_t, 3>, 3>>(
        "win_sum", [](const std::array<std::array<std::int8_t, 3>, 3>& m) {
          std::int64_t sum = 0;
          for (const auto& row : m)
            for (std::int8_t v : row) sum += v;
          return static_cast<double>(sum);
        }));
    ins.push_back(tpg::make_lambda_instruction<std::array<double, 3>>(
        "spread", [](const std::array<double, 3>& v) { return v[0] - v[1] * v[2]; }));
    ins.push_back(tpg::make_lambda_instruction<std::int64_t, double>(
        "mix", [](std::int64_t a, double b) { return static_cast<double>(a) + b; }));
    auto built = std::make_shared<const tpg::InstructionSet>("mixed", std::move(ins));
    tpg::register_instruction_set("mixed", [built] { return *built; });
    return built;
  }();
  return set;
}

std::vector<oracle::Op> mixed_ops() {
  using oracle::Form;
  using oracle::Kind;
  const oracle::Operand f64{Kind::F64, Form::Scalar};
  return {
      {"add", {f64, f64}, [](const auto& a) { return a[0][0] + a[1][0]; }},
      {"scale", {f64, {Kind::I8, Form::Scalar}}, [](const auto& a) { return a[0][0] * a[1][0]; }},
      {"dot",
       {{Kind::I64, Form::Scalar}, {Kind::I8, Form::Vector, 1, 2}},
       [](const auto& a) {
         // Integer product: a negative operand times zero is +0, not -0.
         const auto i = [](double v) { return static_cast<std::int64_t>(v); };
         return static_cast<double>(i(a[0][0]) * (i(a[1][0]) + i(a[1][1])));
       }},
      {"win_sum",
       {{Kind::I8, Form::Matrix, 3, 3}},
       [](const auto& a) {
         double sum = 0;
         for (double v : a[0]) sum += v;
         return sum;
       }},
      {"spread", {{Kind::F64, Form::Vector, 1, 3}}, [](const auto& a) { return a[0][0] - a[0][1] * a[0][2]; }},
      {"mix", {{Kind::I64, Form::Scalar}, f64}, [](const auto& a) { return a[0][0] + a[1][0]; }},
  };
}

std::vector<tpg::SourceShape> mixed_shapes() {
  return {tpg::SourceShape::grid(ElementKind::Int8, 4, 4), tpg::SourceShape::linear(ElementKind::Float64, 5),
          tpg::SourceShape::linear(ElementKind::Int64, 3)};
}

std::shared_ptr<const tpg::ProgramContext> context(std::shared_ptr<const tpg::InstructionSet> set,
                                                   std::vector<tpg::SourceShape> shapes, std::size_t registers) {
  return std::make_shared<const tpg::ProgramContext>(std::move(set), registers, std::move(shapes));
}

tpg::StateSnapshot random_snapshot(const std::vector<tpg::SourceShape>& shapes, tpg::Rng& rng) {
  tpg::StateSnapshot snapshot;
  for (const auto& shape : shapes) {
    tpg::SourceBuffer buffer(shape);
    switch (shape.kind) {
      case ElementKind::Float64:
        for (double& v : buffer.f64()) {
          switch (rng.uniform_index(20)) {
            case 0: v = 0.0; break;
            case 1: v = -0.0; break;
            case 2: v = std::numeric_limits<double>::infinity(); break;
            case 3: v = std::numeric_limits<double>::quiet_NaN(); break;
            default: v = rng.uniform(-10.0, 10.0);
          }
        }
        break;
      case ElementKind::Int64:
        for (auto& v : buffer.i64()) v = static_cast<std::int64_t>(rng.uniform_index(2001)) - 1000;
        break;
      case ElementKind::Int8:
        for (auto& v : buffer.i8()) v = static_cast<std::int8_t>(static_cast<int>(rng.uniform_index(256)) - 128);
        break;
    }
    snapshot.push_back(std::move(buffer));
  }
  return snapshot;
}

tpg::TpgGraph random_graph(std::shared_ptr<const tpg::ProgramContext> context, std::size_t actions,
                           std::size_t teams, std::size_t max_edges, std::size_t max_program, tpg::Rng& rng) {
  tpg::TpgGraph graph(std::move(context), actions);
  for (std::size_t i = 0; i < teams; ++i) graph.add_team();
  for (std::size_t i = 0; i < teams; ++i) {
    const tpg::TeamId self{static_cast<std::uint32_t>(i)};
    const std::size_t k = 2 + rng.uniform_index(max_edges - 1);
    for (std::size_t e = 0; e < k; ++e) {
      tpg::Vertex dest = tpg::Vertex::action(static_cast<tpg::ActionId>(rng.uniform_index(actions)));
      if (e > 0 && teams > 2 && rng.bernoulli(0.5)) {
        std::uint32_t t = 1 + static_cast<std::uint32_t>(rng.uniform_index(teams - 1));
        if (t != i) dest = tpg::Vertex::team(tpg::TeamId{t});
      }
      graph.add_edge(self, dest, tpg::random_program(graph.context(), max_program, rng));
    }
  }
  return graph;
}

bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace fixtures
